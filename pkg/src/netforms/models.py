"""Projective models: the split threefold as five quadrics in P^6, its
Grassmannian description, the characteristic-2 cover and the deformation over
the dual numbers."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .algebra import (GF, ZZ, Matrix, PolyRing, Polynomial, Ring, RingError, TruncatedPolyRing,
                      pfaffian, rref)
from .algebra.codec import poly_to_json
from .forms import PAIRS, AlternatingNet

A_VARS = [f"a{k}" for k in range(7)]
B_VARS = [f"b{i + 1}{j + 1}" for i, j in PAIRS]
V10_EXTRA = "t"


@dataclass(frozen=True)
class QuadricSystem:
    ring: Ring
    vars: tuple
    generators: tuple
    notes: dict = field(default_factory=dict, compare=False)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def to_json(self) -> dict:
        return {"ring": self.ring.spec(), "vars": list(self.vars),
                "generators": [poly_to_json(g) for g in self.generators]}


def _ring_of(ring, names):
    return PolyRing(ring, names)


def _base(ring):
    return ring.base if isinstance(ring, TruncatedPolyRing) else ring


def y_split_ideal(ring: Ring = ZZ) -> QuadricSystem:
    """The five quadrics cutting out the split threefold in P^6."""
    R = _ring_of(ring, A_VARS)
    a = [R.gen(v) for v in A_VARS]
    gens = (
        a[0] * a[4] - a[1] * a[3] + a[2] ** 2,
        a[0] * a[5] - a[1] * a[4] + a[2] * a[3],
        a[0] * a[6] - a[2] * a[4] + a[3] ** 2,
        a[1] * a[6] - a[2] * a[5] + a[3] * a[4],
        a[2] * a[6] - a[3] * a[5] + a[4] ** 2,
    )
    return QuadricSystem(ring, tuple(R.names), gens)


def grassmann_pfaffians(ring: Ring = ZZ):
    """Principal 4x4 Pfaffians of the generic alternating 5x5 matrix (b_ij),
    listed for the index sets 1234, 1235, 1245, 1345, 2345."""
    R = _ring_of(ring, B_VARS)
    m = [[R.zero] * 5 for _ in range(5)]
    for i, j in PAIRS:
        g = R.gen(f"b{i + 1}{j + 1}")
        m[i][j] = g
        m[j][i] = -g
    X = Matrix(R, m)
    return [pfaffian(X.delete(k, k)) for k in (4, 3, 2, 1, 0)]


def plucker_coordinates(u, v, ring: Ring) -> dict:
    """b_ij = u_i v_j - u_j v_i."""
    return {f"b{i + 1}{j + 1}": ring.sub(ring.mul(u[i], v[j]), ring.mul(u[j], v[i])) for i, j in PAIRS}


def _rename_auto(free):
    """a_{i+j-3} names for the surviving Plucker coordinates when injective."""
    names = {}
    for b in free:
        i, j = int(b[1]), int(b[2])
        names[b] = f"a{i + j - 3}"
    if len(set(names.values())) == len(free):
        return names
    return {b: b for b in free}


PREFERRED_PIVOTS = ("b23", "b24", "b34")


def section_relations(net: AlternatingNet, solve_for: Sequence[str] | None = PREFERRED_PIVOTS):
    """Solve the three linear conditions sum X_ij b_ij = 0 (X = A, B, C) for
    three Plucker coordinates.  ``solve_for`` names the preferred ones; when
    they cannot be solved for, plain row reduction picks them.  Returns
    ({pivot: linear polynomial in the free coordinates}, free)."""
    R = net.ring
    coeff = net.coefficient_matrix()
    order = list(range(10))
    if solve_for:
        first = [B_VARS.index(b) for b in solve_for]
        order = first + [k for k in order if k not in first]
    try:
        red, piv = rref(coeff.submatrix(range(3), order))
        ok = len(piv) == 3 and (not solve_for or piv == [0, 1, 2])
    except RingError:
        ok = False
    if not ok:
        if solve_for:
            return section_relations(net, None)
        raise RingError("net coefficient map is not of full rank 3")
    cols = [order[c] for c in piv]
    free = [B_VARS[k] for k in range(10) if k not in cols]
    P = _ring_of(R, free)
    sol = {}
    for r, c in enumerate(cols):
        acc = P.zero
        for pos, k in enumerate(order):
            if k in cols:
                continue
            x = red[r, pos]
            if not R.is_zero(x):
                acc = acc - P.gen(B_VARS[k]) * P.from_element(x)
        sol[B_VARS[c]] = acc
    return sol, free


def grassmannian_section(net: AlternatingNet, rename: str = "auto",
                         solve_for: Sequence[str] | None = PREFERRED_PIVOTS) -> QuadricSystem:
    """Substitute the net's linear relations into the Grassmannian Pfaffians."""
    sol, free = section_relations(net, solve_for)
    return substitute_relations(net.ring, sol, free, rename)


def substitute_relations(ring: Ring, sol: dict, free, rename: str = "auto") -> QuadricSystem:
    pf = grassmann_pfaffians(ring)
    names = _rename_auto(free) if rename == "auto" else {b: b for b in free}
    ordered = sorted(free, key=lambda b: names[b])
    S = _ring_of(ring, [names[b] for b in ordered])
    mapping = {b: S.gen(names[b]) for b in free}
    for b, lin in sol.items():
        mapping[b] = lin.substitute({f: S.gen(names[f]) for f in free}, S.names)
    gens = tuple(p.substitute(mapping, S.names) for p in pf)
    return QuadricSystem(ring, tuple(S.names), gens,
                         notes={"relations": {b: str(v) for b, v in sol.items()}, "renaming": names})


def membership(point: Sequence, system: QuadricSystem, field: Ring | None = None) -> bool:
    F = field or system.ring
    vals = dict(zip(system.vars, point))
    return all(F.is_zero(g.evaluate(vals, F)) for g in system.generators)


# -- span comparisons ----------------------------------------------------------------

def _coefficient_rows(polys, names, ring):
    """Coefficient vectors over ``ring`` with respect to the monomials in
    ``names`` (other variables are part of the coefficient ring)."""
    monos = set()
    split = []
    for p in polys:
        d = _split_coefficients(p, names, ring)
        split.append(d)
        monos |= set(d)
    monos = sorted(monos, reverse=True)
    zero = ring.zero
    return [[d.get(m, zero) for m in monos] for d in split], monos


def _split_coefficients(p: Polynomial, names, ring) -> dict:
    """Group the terms of p by the exponents of ``names``; coefficients are
    elements of ``ring`` (a truncated ring when its variables remain)."""
    idx = [p.vars.index(v) for v in names]
    rest = [k for k, v in enumerate(p.vars) if v not in names]
    out = {}
    if isinstance(ring, TruncatedPolyRing):
        rnames = ring.names
        for e, c in p.as_dict().items():
            key = tuple(e[k] for k in idx)
            ce = tuple(e[p.vars.index(v)] if v in p.vars else 0 for v in rnames)
            term = Polynomial(ring, rnames, {ce: c}, coerce=False)
            out[key] = out[key] + term if key in out else term
        return out
    if any(e[k] for e in p.as_dict() for k in rest):
        raise RingError("coefficients outside the scalar ring")
    for e, c in p.as_dict().items():
        out[tuple(e[k] for k in idx)] = c
    return out


def span_contains(polys, candidates, names, ring) -> bool:
    """Every candidate lies in the span (over ``ring``) of ``polys``.  Over a
    local ring the rows of ``polys`` must reduce with unit pivots."""
    rows, monos = _coefficient_rows(list(polys) + list(candidates), names, ring)
    base = [r for r in rows[:len(polys)]]
    red, piv = rref(Matrix(ring, base)) if base else (None, [])
    for extra in rows[len(polys):]:
        v = list(extra)
        for r, c in enumerate(piv):
            f = v[c]
            if not ring.is_zero(f):
                v = [ring.sub(x, ring.mul(f, y)) for x, y in zip(v, red.row(r))]
        if any(not ring.is_zero(x) for x in v):
            return False
    return True


def same_span(s1, s2, names, ring) -> bool:
    return span_contains(s1, s2, names, ring) and span_contains(s2, s1, names, ring)


def degree_part_contains(system: QuadricSystem, f: Polynomial, ring) -> bool:
    """f (homogeneous of degree d) lies in the degree-d part of the ideal."""
    names = list(system.vars)
    d = f.total_degree()
    gens = []
    for g in system.generators:
        k = d - g.total_degree()
        for e in product(range(k + 1), repeat=len(names)):
            if sum(e) == k:
                mono = Polynomial(ring, names, {e: 1})
                gens.append(g.with_vars(names) * mono if set(g.vars) <= set(names) else g * mono)
    return span_contains(gens, [f.with_vars(names)], names, ring)


# -- characteristic 2 -----------------------------------------------------------------

def seventh_quadric(ring: Ring):
    R = _ring_of(ring, A_VARS)
    a = [R.gen(v) for v in A_VARS]
    return a[1] * a[5] + a[0] * a[3] + a[3] * a[6]


def v10_ideal(ring: Ring = None) -> QuadricSystem:
    """The split quadrics plus t^2 - (a1 a5 + a0 a3 + a3 a6) in P^7 (char 2)."""
    ring = ring or GF(2)
    if ring.characteristic != 2:
        raise RingError("the cover is defined in characteristic 2")
    R = _ring_of(ring, A_VARS + [V10_EXTRA])
    gens = tuple(g.with_vars(R.names) for g in y_split_ideal(ring).generators)
    t = R.gen(V10_EXTRA)
    gens += (t * t - seventh_quadric(ring).with_vars(R.names),)
    return QuadricSystem(ring, tuple(R.names), gens)


def v10_quotient_map(point: Sequence, ring: Ring):
    """(a_i) -> (a_0^2, ..., a_6^2, a1 a5 + a0 a3 + a3 a6)."""
    if ring.characteristic != 2:
        raise RingError("the quotient map is defined in characteristic 2")
    a = list(point)
    sq = [ring.mul(x, x) for x in a]
    last = ring.add(ring.add(ring.mul(a[1], a[5]), ring.mul(a[0], a[3])), ring.mul(a[3], a[6]))
    return tuple(sq) + (last,)


def v10_map_polynomials(ring: Ring):
    R = _ring_of(ring, A_VARS)
    a = [R.gen(v) for v in A_VARS]
    return [x * x for x in a] + [seventh_quadric(ring)]


# -- the deformation over the dual numbers ---------------------------------------------

def dual_numbers():
    return TruncatedPolyRing(GF(2), {"t": 2})


def deformed_form(xi: int, eta: int):
    """[[t1, 1, 0], [1, t2, 0], [0, 0, 1]] with t1 = xi t, t2 = eta t."""
    from .forms import TernarySymForm
    D = dual_numbers()
    t = D.gen("t")
    t1, t2 = t * xi, t * eta
    return TernarySymForm(D, Matrix(D, [[t1, D.one, D.zero], [D.one, t2, D.zero], [D.zero, D.zero, D.one]]))


def deformed_ideal(xi: int, eta: int) -> QuadricSystem:
    """The printed family of quadrics over GF(2)[t]/(t^2), t1 = xi t, t2 = eta t."""
    D = dual_numbers()
    R = PolyRing(D, A_VARS)
    a = [R.gen(v) for v in A_VARS]
    t = R.gen("t")
    t1, t2 = t * xi, t * eta
    gens = (
        a[0] * a[4] + a[1] * a[3] + a[2] ** 2 + t1 * (a[0] * a[6] + a[1] * a[5] + a[2] * a[4]) + t2 * a[1] ** 2,
        a[0] * a[5] + a[1] * a[4] + a[2] * a[3] + t1 * a[3] * a[4] + t2 * a[0] * a[3],
        a[0] * a[6] + a[2] * a[4] + a[3] ** 2 + t1 * a[3] * a[5] + t2 * a[1] * a[3],
        a[1] * a[6] + a[2] * a[5] + a[3] * a[4] + t1 * a[3] * a[6] + t2 * a[2] * a[3],
        a[2] * a[6] + a[3] * a[5] + a[4] ** 2 + t1 * a[5] ** 2 + t2 * (a[0] * a[6] + a[1] * a[5] + a[2] * a[4]),
    )
    return QuadricSystem(D, tuple(R.names), gens)


def deformation_relations(xi: int, eta: int, literal: bool = False):
    """The three deformed linear relations as ({solved coordinate: expression}, free).

    ``literal=True`` transcribes the relations exactly as printed, whose left
    sides read b23 and b24 where b14 and b15 are meant; that system collapses to
    b23 = b24 = b25 = b34 at t = 0 and does not specialize to the split model.
    """
    D = dual_numbers()
    t = D.gen("t")
    t1, t2 = t * xi, t * eta
    if literal:
        free = ["b12", "b13", "b14", "b15", "b25", "b35", "b45"]
        P = _ring_of(D, free + ["b23", "b24", "b34"])
        b = {v: P.gen(v) for v in P.names if v != "t"}
        T1, T2 = P.from_element(t1), P.from_element(t2)
        # solve the triangular system b24 -> b23 -> b34 (t^2 = 0 keeps it finite)
        b24 = b["b25"] + T2 * b["b13"] + T1 * b["b35"]
        b34 = b["b25"] + T2 * (b24 + T2 * b["b12"]) + T1 * b["b45"]
        b23 = b24 + T2 * b["b12"] + T1 * b34
        Pf = _ring_of(D, free)
        sol = {k: v.with_vars(Pf.names) for k, v in (("b23", b23), ("b24", b24), ("b34", b34))}
        return sol, free
    free = ["b12", "b13", "b14", "b15", "b25", "b35", "b45"]
    P = _ring_of(D, free)
    b = {v: P.gen(v) for v in free}
    T1, T2 = P.from_element(t1), P.from_element(t2)
    b34 = b["b25"] + T1 * b["b45"]
    sol = {
        "b34": b34 + T2 * b["b14"],
        "b23": b["b14"] + T2 * b["b12"] + T1 * b34,
        "b24": b["b15"] + T2 * b["b13"] + T1 * b["b35"],
    }
    return sol, free


def deformation_by_substitution(xi: int, eta: int, literal: bool = False) -> QuadricSystem:
    sol, free = deformation_relations(xi, eta, literal)
    return substitute_relations(dual_numbers(), sol, free)


def rational_points(system: QuadricSystem, field) -> list:
    """All points of P^n(GF(q)) on the system, vectorized over P^n."""
    from .algebra.projective import VectorField, projective_array
    import numpy as np
    n = len(system.vars) - 1
    pts = projective_array(field, n)
    cols = [pts[:, i] for i in range(n + 1)]
    VF = VectorField(field)
    mask = np.ones(len(pts), dtype=bool)
    for g in system.generators:
        mask &= VF.eval_poly(g.with_vars(system.vars), cols) == 0
    return [tuple(int(x) for x in row) for row in pts[mask]]
