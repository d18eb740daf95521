"""Lines on the split model and the orbit stratification.

A point of the split model is a 2-plane K in U5 (Plucker coordinates
b_ij = u_i v_j - u_j v_i, read as a_{i+j-3}).  A point P of P^2 gives the
kernel line of the alternating form W(P); the line of the model labelled by
P consists of the planes K that contain this kernel vector, and the kernel
vector is proportional to the projected Veronese image of P.  Hence the lines
through a point p correspond to the points where P(K(p)) meets the projected
Veronese surface.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Sequence

import numpy as np

from .algebra import (GF, Matrix, PolyRing, Polynomial, Ring, RingError, field_extension,
                      nullspace, rank, rref)
from .algebra.projective import (VectorField, normalize, projective_array, projective_points)
from .forms import PAIRS, AlternatingNet, split_net
from .models import A_VARS, B_VARS, section_relations, y_split_ideal

# 0-based index pairs (i, j) of U5 behind each coordinate a_k of the split model
A_PAIRS = {k: [(i, j) for i, j in PAIRS if i + j - 1 == k] for k in range(7)}

ORDINARY, SPECIAL, EXCEPTIONAL = "ordinary", "special", "exceptional"
O3, O2, O1, O1_PRIME = "O3", "O2", "O1", "O1'"

EXPECTED_LINES = {
    O3: (ORDINARY, ORDINARY, ORDINARY),
    O2: (ORDINARY, SPECIAL),
    O1: (SPECIAL,),
    O1_PRIME: (EXCEPTIONAL, SPECIAL),
}
EXPECTED_MULTIPLICITIES = {O3: (1, 1, 1), O2: (2, 1), O1: (3,), O1_PRIME: (2, 1)}


# -- points and planes -----------------------------------------------------------------

def _as_field_point(point, field):
    return tuple(field.coerce(x) if isinstance(x, int) and field.degree == 1 else x for x in point)


def parse_point(text: str, field) -> tuple:
    """'0,-4,0,0,0,1,0' or 'w,w+1,0' -> field element codes."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if hasattr(field, "parse"):
            out.append(field.parse(tok))
        else:
            out.append(field.coerce(int(tok)))
    return tuple(out)


def on_model(point: Sequence, field: Ring) -> bool:
    Y = y_split_ideal(field)
    vals = dict(zip(A_VARS, point))
    return all(field.is_zero(g.evaluate(vals, field)) for g in Y.generators)


def alternating_of_point(point: Sequence, field: Ring) -> Matrix:
    """The 5x5 alternating matrix (b_ij) of a point of the split model."""
    m = [[field.zero] * 5 for _ in range(5)]
    for k, pairs in A_PAIRS.items():
        for i, j in pairs:
            m[i][j] = point[k]
            m[j][i] = field.neg(point[k])
    return Matrix(field, m)


def plane_of_point(point: Sequence, field: Ring):
    """Two vectors u, v of U5 with u ^ v proportional to the point."""
    if not on_model(point, field):
        raise ValueError("point is not on the split model")
    red, piv = rref(alternating_of_point(point, field))
    if len(piv) != 2:
        raise ValueError("point does not define a 2-plane")
    return list(red.row(0)), list(red.row(1))


def point_of_plane(u: Sequence, v: Sequence, field: Ring) -> tuple:
    """a_k = b_ij = u_i v_j - u_j v_i for the first pair behind a_k."""
    out = []
    for k in range(7):
        i, j = A_PAIRS[k][0]
        out.append(field.sub(field.mul(u[i], v[j]), field.mul(u[j], v[i])))
    return tuple(out)


# -- the projected Veronese surface ----------------------------------------------------

def veronese_projection(P: Sequence, field: Ring) -> tuple:
    """(x, y, z) -> (-x^2, zx, -z^2 - xy, yz, -y^2)."""
    x, y, z = P
    if all(field.is_zero(c) for c in P):
        raise ValueError("the zero vector is not a projective point")
    m, n = field.mul, field.neg
    return (n(m(x, x)), m(z, x), n(field.add(m(z, z), m(x, y))), m(y, z), n(m(y, y)))


def veronese_preimage(w: Sequence, field: Ring):
    """The point of P^2 mapping to w, or None when w is off the surface."""
    w0, w1, w2, w3, w4 = w
    F = field
    if not F.is_zero(w0):
        lam = F.neg(w0)
        z = F.div(w1, lam)
        y = F.sub(F.neg(F.div(w2, lam)), F.mul(z, z))
        P = (F.one, y, z)
    elif not F.is_zero(w4):
        lam = F.neg(w4)
        z = F.div(w3, lam)
        P = (F.zero, F.one, z)
    else:
        P = (F.zero, F.zero, F.one)
    image = veronese_projection(P, F)
    if normalize(image, F) != normalize(w, F):
        return None
    return normalize(P, F)


@lru_cache(maxsize=None)
def veronese_cubics(field: Ring):
    """Cubics in w0..w4 vanishing on the projected Veronese surface (a basis
    of the degree-3 kernel of w -> veronese_projection(x, y, z))."""
    W = PolyRing(field, [f"w{i}" for i in range(5)])
    X = PolyRing(field, ["x", "y", "z"])
    x, y, z = X.gen("x"), X.gen("y"), X.gen("z")
    images = [-(x * x), z * x, -(z * z) - x * y, y * z, -(y * y)]
    monos = list(combinations_with_replacement(range(5), 3))
    sextics = sorted({e for e in product(range(7), repeat=3) if sum(e) == 6}, reverse=True)
    rows = []
    for mono in monos:
        f = images[mono[0]] * images[mono[1]] * images[mono[2]]
        d = f.as_dict()
        rows.append([d.get(e, field.zero) for e in sextics])
    # left kernel: vectors c with c^T rows = 0
    kernel = nullspace(Matrix(field, rows).T)
    cubics = []
    for c in kernel:
        terms = {}
        for coeff, mono in zip(c, monos):
            if field.is_zero(coeff):
                continue
            e = [0] * 5
            for i in mono:
                e[i] += 1
            terms[tuple(e)] = coeff
        cubics.append(Polynomial(field, W.names, terms, coerce=False))
    return tuple(cubics)


# -- binary forms ---------------------------------------------------------------------

def _restrict(poly: Polynomial, u, v, field):
    """Coefficients (of s^d, s^(d-1) t, ..., t^d) of poly(s u + t v)."""
    S = PolyRing(field, ["s", "t"])
    s, t = S.gen("s"), S.gen("t")
    vals = {name: s * S.from_element(a) + t * S.from_element(b) for name, a, b in zip(poly.vars, u, v)}
    g = poly.evaluate(vals, S)
    d = poly.total_degree()
    coeffs = g.as_dict()
    return [coeffs.get((d - i, i), field.zero) for i in range(d + 1)]


def _root_multiplicity(coeffs, root, field) -> int:
    """Multiplicity of the P^1 point ``root`` = (s0, t0) of the binary form."""
    s0, t0 = root
    F = field
    if F.is_zero(t0):
        k = 0
        while k < len(coeffs) and F.is_zero(coeffs[k]):
            k += 1
        return k
    r = F.div(s0, t0)
    # f(s, 1) with descending powers of s
    poly = list(coeffs)
    while poly and F.is_zero(poly[0]):
        poly.pop(0)
    mult = 0
    while len(poly) > 1:
        # synthetic division by (s - r)
        out = [poly[0]]
        for c in poly[1:]:
            out.append(F.add(c, F.mul(out[-1], r)))
        if not F.is_zero(out[-1]):
            break
        mult += 1
        poly = out[:-1]
    if len(poly) == 1 and F.is_zero(poly[0]):
        raise ValueError("zero binary form")
    return mult


def _p1_points(field):
    yield (field.one, field.zero)
    for a in field.elements():
        yield (a, field.one)


def binary_roots(forms, field, big, emb):
    """Common roots in P^1(big) of binary forms over ``field``, with the
    multiplicity of the gcd at each root."""
    forms = [f for f in forms if not all(field.is_zero(c) for c in f)]
    if not forms:
        raise ValueError("all forms vanish identically")
    lifted = [[emb[c] if emb is not None else c for c in f] for f in forms]
    out = []
    for root in _p1_points(big):
        mults = [_root_multiplicity(f, root, big) for f in lifted]
        m = min(mults)
        if m:
            out.append((root, m))
    return out


def _tower(field, k):
    if k == 1:
        return field, None
    return field_extension(field, k)


@dataclass(frozen=True)
class Trisecant:
    field: Ring
    points: tuple          # ((P, multiplicity), ...) with P in P^2(field)
    plane: tuple           # (u, v) in the extension field

    @property
    def profile(self) -> tuple:
        return tuple(sorted((m for _, m in self.points), reverse=True))


def trisecant_points(point: Sequence, field: Ring) -> Trisecant:
    """Where the line P(K(point)) in P^4 meets the projected Veronese surface,
    with multiplicities.  Roots are searched over GF(q^k), k = 1, 2, 3; the
    first k where the multiplicities add up to 3 is returned."""
    u, v = plane_of_point(point, field)
    forms = [_restrict(c, u, v, field) for c in veronese_cubics(field)]
    for k in (1, 2, 3):
        big, emb = _tower(field, k)
        roots = binary_roots(forms, field, big, emb)
        if sum(m for _, m in roots) == 3:
            uu = [emb[c] if emb is not None else c for c in u]
            vv = [emb[c] if emb is not None else c for c in v]
            pts = []
            for (s0, t0), m in roots:
                w = [big.add(big.mul(s0, a), big.mul(t0, b)) for a, b in zip(uu, vv)]
                P = veronese_preimage(w, big)
                if P is None:
                    raise RingError("intersection point is not on the Veronese surface")
                pts.append((P, m))
            pts.sort()
            return Trisecant(big, tuple(pts), (tuple(uu), tuple(vv)))
    raise RingError("the line does not meet the surface in a scheme of length 3")


# -- lines --------------------------------------------------------------------------

def line_type(P: Sequence, field: Ring) -> str:
    x, y, z = P
    F = field
    if F.characteristic == 2:
        if F.is_zero(x) and F.is_zero(y):
            return EXCEPTIONAL
        return SPECIAL if F.is_zero(z) else ORDINARY
    conic = F.sub(F.mul(z, z), F.mul(F.from_int(2), F.mul(x, y)))
    return SPECIAL if F.is_zero(conic) else ORDINARY


@dataclass(frozen=True)
class LineInY:
    field: Ring
    basis: tuple                      # two spanning points of P^6
    label: tuple | None = None        # the point of P^2 it corresponds to
    kind: str | None = None

    def point(self, s, t) -> tuple:
        F = self.field
        p, q = self.basis
        return tuple(F.add(F.mul(s, a), F.mul(t, b)) for a, b in zip(p, q))

    def canonical(self):
        red, piv = rref(Matrix(self.field, [list(self.basis[0]), list(self.basis[1])]))
        if len(piv) != 2:
            raise ValueError("spanning points are dependent")
        return red.rows

    def __eq__(self, other):
        return isinstance(other, LineInY) and self.field == other.field and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def contains(self, point) -> bool:
        return rank(Matrix(self.field, [list(self.basis[0]), list(self.basis[1]), list(point)])) == 2

    def parametrization(self) -> list:
        """Each coordinate as a linear form in s, t (strings)."""
        F = self.field
        p, q = self.basis
        out = []
        for a, b in zip(p, q):
            parts = []
            for c, name in ((a, "s"), (b, "t")):
                if F.is_zero(c):
                    continue
                txt = F.format(c) if hasattr(F, "format") else str(c)
                parts.append(name if txt == "1" else f"({txt})*{name}" if "+" in txt else f"{txt}*{name}")
            out.append(" + ".join(parts) if parts else "0")
        return out

    def to_json(self):
        F = self.field
        fmt = F.format if hasattr(F, "format") else str
        return {"field": F.spec(), "basis": [[fmt(x) for x in p] for p in self.basis],
                "label": None if self.label is None else [fmt(x) for x in self.label],
                "kind": self.kind, "parametrization": self.parametrization()}


def net_kernel(net: AlternatingNet, P: Sequence, field: Ring):
    x, y, z = P
    ker = nullspace(net.at(x, y, z))
    if len(ker) != 1:
        raise RingError(f"the net has rank {5 - len(ker)} at {P}")
    return ker[0]


def _section_coordinates(net):
    """Plucker indices of the free coordinates of the section, in a0..a6 order."""
    from .models import _rename_auto
    _, free = section_relations(net)
    names = _rename_auto(free)
    ordered = sorted(free, key=lambda b: names[b])
    return [PAIRS[B_VARS.index(b)] for b in ordered]


def line_from_net_point(P: Sequence, field: Ring, net: AlternatingNet | None = None) -> LineInY:
    """The line of the model labelled by P: planes K containing the kernel
    vector k of W(P), i.e. K = span(k, w) with k^T X w = 0 for X = A, B, C."""
    F = field
    net = net or split_net(F)
    k = net_kernel(net, P, F)
    conds = Matrix(F, [[_dot(F, k, col) for col in X.T.rows] for X in net.matrices])
    space = nullspace(conds)
    others = []
    for w in space:
        if rank(Matrix(F, [k] + others + [w])) == len(others) + 2:
            others.append(w)
        if len(others) == 2:
            break
    if len(others) != 2:
        raise RingError("kernel conditions do not cut out a pencil")
    coords = _section_coordinates(net)
    pts = []
    for w in others:
        pts.append(tuple(F.sub(F.mul(k[i], w[j]), F.mul(k[j], w[i])) for i, j in coords))
    return LineInY(F, tuple(pts), normalize(P, F), line_type(P, F))


def _dot(F, a, b):
    acc = F.zero
    for x, y in zip(a, b):
        acc = F.add(acc, F.mul(x, y))
    return acc


def polarization_matrix(point: Sequence, field: Ring) -> Matrix:
    """Rows: the bilinear forms B_q(point, .) of the five quadrics (formal
    gradients, so no division by 2 in characteristic 2)."""
    Y = y_split_ideal(field)
    vals = dict(zip(A_VARS, point))
    return Matrix(field, [[g.derivative(v).evaluate(vals, field) for v in A_VARS]
                          for g in Y.generators])


def _in_subfield(vec, emb_set) -> bool:
    return all(int(x) in emb_set for x in vec)


def lines_through(point: Sequence, field: Ring, max_degree: int = 3) -> list:
    """All lines of the model through ``point`` (over the algebraic closure),
    each reported over the smallest GF(q^k), k <= 3, where it is defined."""
    F = field
    if not on_model(point, F):
        raise ValueError("point is not on the split model")
    tangent = nullspace(polarization_matrix(point, F))
    comp = []
    for w in tangent:
        if rank(Matrix(F, [list(point)] + comp + [w])) == len(comp) + 2:
            comp.append(w)
    if len(comp) != 3:
        raise RingError("unexpected tangent space dimension")
    C = PolyRing(F, ["c1", "c2", "c3"])
    cs = [C.gen(n) for n in C.names]
    ys = [sum((cs[i] * C.from_element(comp[i][j]) for i in range(3)), C.zero) for j in range(7)]
    restricted = [g.evaluate(dict(zip(A_VARS, ys)), C) for g in y_split_ideal(F).generators]
    found = []
    seen_base = set()
    for k in ((2, 3) if max_degree >= 3 else (2,)):
        big, emb = _tower(F, k)
        VF = VectorField(big)
        pts = projective_array(big, 2)
        cols = [pts[:, i] for i in range(3)]
        mask = np.ones(len(pts), dtype=bool)
        for r in restricted:
            rr = r.map_coefficients(big) if emb is not None else r
            mask &= VF.eval_poly(rr.with_vars(C.names), cols) == 0
        sub = set(int(x) for x in emb) if emb is not None else None
        inv = {int(b): a for a, b in enumerate(emb)} if emb is not None else None
        comp_big = [[emb[x] if emb is not None else x for x in row] for row in comp]
        for c in pts[mask]:
            c = tuple(int(x) for x in c)
            y = tuple(_dot(big, c, [comp_big[i][j] for i in range(3)]) for j in range(7))
            y = normalize(y, big)
            if sub is not None and _in_subfield(y, sub):
                yb = tuple(inv[int(x)] for x in y)
                if yb in seen_base:
                    continue
                seen_base.add(yb)
                found.append(_line_through(point, yb, F))
            else:
                pb = tuple(emb[x] for x in point) if emb is not None else tuple(point)
                found.append(_line_through(pb, y, big))
    return found


def _line_through(p, y, field) -> LineInY:
    u1, v1 = plane_of_point(p, field)
    u2, v2 = plane_of_point(y, field)
    M = Matrix(field, [u1, v1, [field.neg(x) for x in u2], [field.neg(x) for x in v2]]).T
    ker = nullspace(M)
    if len(ker) != 1:
        raise RingError("planes of two points on a line must meet in a line")
    a, b = ker[0][0], ker[0][1]
    common = [field.add(field.mul(a, x), field.mul(b, z)) for x, z in zip(u1, v1)]
    P = veronese_preimage(common, field)
    if P is None:
        raise RingError("common vector is off the Veronese surface")
    return LineInY(field, (tuple(p), tuple(y)), P, line_type(P, field))


# -- orbits ---------------------------------------------------------------------------

def divisor_value(point, field):
    """5 a2 a4 - 4 a1 a5 + 27 a0 a6."""
    F = field
    a = point
    return F.add(F.sub(F.mul(F.from_int(5), F.mul(a[2], a[4])), F.mul(F.from_int(4), F.mul(a[1], a[5]))),
                 F.mul(F.from_int(27), F.mul(a[0], a[6])))


def nu(P: Sequence, Q: Sequence, field: Ring) -> tuple:
    """The normalization P^1 x P^1 -> D, ((alpha, gamma), (beta, delta)) -> ..."""
    F = field
    al, ga = P
    be, de = Q
    m = F.mul

    def mono(c, *factors):
        out = F.from_int(c)
        for f, k in factors:
            out = m(out, F.pow(f, k))
        return out
    return (
        mono(8, (al, 1), (be, 5)),
        F.add(mono(4, (be, 5), (ga, 1)), mono(20, (al, 1), (be, 4), (de, 1))),
        F.add(mono(4, (be, 4), (ga, 1), (de, 1)), mono(8, (al, 1), (be, 3), (de, 2))),
        F.add(mono(4, (be, 3), (ga, 1), (de, 2)), mono(4, (al, 1), (be, 2), (de, 3))),
        F.add(mono(4, (be, 2), (ga, 1), (de, 3)), mono(2, (al, 1), (be, 1), (de, 4))),
        F.add(mono(5, (be, 1), (ga, 1), (de, 4)), mono(1, (al, 1), (de, 5))),
        mono(1, (ga, 1), (de, 5)),
    )


def nu_prime(P: Sequence, field: Ring) -> tuple:
    """(x, y, z) -> (x^3, x^2 z, x^2 y, 0, x y^2, y^2 z, y^3), extended over
    the blown-up point by the exceptional chart."""
    F = field
    x, y, z = P
    if F.is_zero(x) and F.is_zero(y):
        raise ValueError("(0:0:1) is blown up; use nu_prime_exceptional")
    c = lambda a, b: F.mul(a, b)
    return (c(c(x, x), x), c(c(x, x), z), c(c(x, x), y), F.zero, c(x, c(y, y)), c(c(y, y), z), c(c(y, y), y))


def nu_prime_exceptional(P: Sequence, field: Ring) -> tuple:
    F = field
    x, y = P
    return (F.zero, F.mul(x, x), F.zero, F.zero, F.zero, F.mul(y, y), F.zero)


def nu_prime_preimage(point: Sequence, field: Ring):
    """('plane', P) or ('exceptional', (x, y)) with nu' of it equal to point,
    or None.  Uses that Frobenius is bijective on a finite field."""
    F = field
    a = normalize(point, F)
    if not F.is_zero(a[3]):
        return None
    if not F.is_zero(a[0]):
        cand = ("plane", (F.one, F.div(a[2], a[0]), F.div(a[1], a[0])))
    elif not F.is_zero(a[6]):
        cand = ("plane", (F.zero, F.one, F.div(a[5], a[6])))
    else:
        roots = (F.sqrt(a[1]), F.sqrt(a[5]))
        if None in roots:
            return None
        cand = ("exceptional", roots)
    kind, P = cand
    try:
        image = nu_prime(P, F) if kind == "plane" else nu_prime_exceptional(P, F)
        if normalize(image, F) == a:
            return kind, normalize(P, F)
    except (ValueError, ZeroDivisionError):
        pass
    return None


def classify_point(point: Sequence, field: Ring) -> str:
    F = field
    if not on_model(point, F):
        raise ValueError("point is not on the split model")
    p = normalize(point, F)
    if F.characteristic == 2:
        if not F.is_zero(p[3]):
            return O3
        pre = nu_prime_preimage(p, F)
        if pre is None:
            raise RingError("point of D_red without a preimage under nu'")
        kind, P = pre
        if kind == "exceptional":
            return O1_PRIME
        return O1 if F.is_zero(P[2]) else O2
    if not F.is_zero(divisor_value(p, F)):
        return O3
    for P in projective_points(F, 1):
        if normalize(nu(P, P, F), F) == p:
            return O1
    return O2


# -- censuses ---------------------------------------------------------------------------

def model_points(field: Ring) -> list:
    """All points of the split model over a finite field, by enumerating P^6."""
    from .models import rational_points
    return rational_points(y_split_ideal(field), field)


def line_profile(lines) -> tuple:
    order = {EXCEPTIONAL: 0, ORDINARY: 1, SPECIAL: 2}
    return tuple(sorted((l.kind for l in lines), key=order.get))


def trisecant_line_kinds(tri: Trisecant) -> tuple:
    order = {EXCEPTIONAL: 0, ORDINARY: 1, SPECIAL: 2}
    return tuple(sorted((line_type(P, tri.field) for P, _ in tri.points), key=order.get))


def census(q: int, use_polarization: bool = False) -> dict:
    """Enumerate the model over GF(q), classify every point and cross-check
    the lines through it against the orbit table."""
    F = GF(q)
    pts = model_points(F)
    orbit_sizes = Counter()
    line_table = {}
    mult_table = {}
    mismatches = []
    for p in pts:
        label = classify_point(p, F)
        orbit_sizes[label] += 1
        tri = trisecant_points(p, F)
        kinds = trisecant_line_kinds(tri)
        if use_polarization:
            kinds_pol = line_profile(lines_through(p, F))
            if kinds_pol != kinds:
                mismatches.append({"point": [F.format(x) for x in p], "reason": "polarization disagrees"})
        line_table.setdefault(label, Counter())[",".join(kinds)] += 1
        mult_table.setdefault(label, Counter())[",".join(map(str, tri.profile))] += 1
        if kinds != _sorted_expected(label) or tri.profile != EXPECTED_MULTIPLICITIES[label]:
            mismatches.append({"point": [F.format(x) for x in p], "orbit": label,
                               "lines": list(kinds), "multiplicities": list(tri.profile)})
    total = len(pts)
    return {
        "q": q,
        "total": total,
        "expected_total": 1 + q + q * q + q ** 3,
        "orbits": dict(sorted(orbit_sizes.items())),
        "lines": {k: dict(sorted(v.items())) for k, v in sorted(line_table.items())},
        "multiplicities": {k: dict(sorted(v.items())) for k, v in sorted(mult_table.items())},
        "consistent": not mismatches and sum(orbit_sizes.values()) == total,
        "mismatches": mismatches,
    }


def _sorted_expected(label):
    order = {EXCEPTIONAL: 0, ORDINARY: 1, SPECIAL: 2}
    return tuple(sorted(EXPECTED_LINES[label], key=order.get))


def sigma_orbits_on_lines(q: int) -> dict:
    """Partition P^2(GF(q)) into the line-orbit strata and check that the
    images of SL2(GF(q)) in PGL3 preserve each stratum."""
    from .groups import embed_pgl2, embed_sl2_char2, sl2_elements
    F = GF(q)
    parts = {}
    for P in projective_points(F, 2):
        parts.setdefault(line_type(P, F), []).append(P)
    if F.characteristic == 2:
        embed = embed_sl2_char2
    else:
        embed = embed_pgl2
    index = {P: kind for kind, members in parts.items() for P in members}
    preserved = True
    for g in sl2_elements(F):
        A = embed(g)
        for P, kind in index.items():
            image = normalize(A @ list(P), F)
            if index[image] != kind:
                preserved = False
    return {"q": q, "parts": {k: v for k, v in sorted(parts.items())}, "preserved": preserved}
