"""Symmetries of the split model: the stabilizer of the split conic, the 7x7
representations of PGL2 (2 invertible) and SL2 (characteristic 2), and the
non-reduced characteristic-2 group with its subgroups H and K."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import (GF, ZZ, Matrix, PolyRing, Polynomial, Ring, RingError, TruncatedPolyRing,
                      determinant)
from .algebra.projective import normalize
from .models import QuadricSystem, span_contains

# Entries of the PGL2 representation, rows = image coordinates a0..a6.  The
# (5, 2) entry is printed with a degree-5 first term; the d factor restores
# homogeneity and is confirmed by the homomorphism and Y-preservation checks.
SIGMA_TABLE = (
    ("a^6", "2a^5b", "10a^4b^2", "20a^3b^3", "20a^2b^4", "8ab^5", "8b^6"),
    ("3a^5c", "5a^4bc + a^5d", "20a^3b^2c + 10a^4bd", "30a^2b^3c + 30a^3b^2d",
     "20ab^4c + 40a^2b^3d", "4b^5c + 20ab^4d", "24b^5d"),
    ("3/2a^4c^2", "2a^3bc^2 + a^4cd", "6a^2b^2c^2 + 8a^3bcd + a^4d^2",
     "6ab^3c^2 + 18a^2b^2cd + 6a^3bd^2", "2b^4c^2 + 16ab^3cd + 12a^2b^2d^2",
     "4b^4cd + 8ab^3d^2", "12b^4d^2"),
    ("a^3c^3", "a^2bc^3 + a^3c^2d", "2ab^2c^3 + 6a^2bc^2d + 2a^3cd^2",
     "b^3c^3 + 9ab^2c^2d + 9a^2bcd^2 + a^3d^3", "4b^3c^2d + 12ab^2cd^2 + 4a^2bd^3",
     "4b^3cd^2 + 4ab^2d^3", "8b^3d^3"),
    ("3/4a^2c^4", "1/2abc^4 + a^2c^3d", "1/2b^2c^4 + 4abc^3d + 3a^2c^2d^2",
     "3b^2c^3d + 9abc^2d^2 + 3a^2cd^3", "6b^2c^2d^2 + 8abcd^3 + a^2d^4",
     "4b^2cd^3 + 2abd^4", "6b^2d^4"),
    ("3/4ac^5", "1/4bc^5 + 5/4ac^4d", "5/2bc^4d + 5ac^3d^2", "15/2bc^3d^2 + 15/2ac^2d^3",
     "10bc^2d^3 + 5acd^4", "5bcd^4 + ad^5", "6bd^5"),
    ("1/8c^6", "1/4c^5d", "5/4c^4d^2", "5/2c^3d^3", "5/2c^2d^4", "cd^5", "d^6"),
)
SIGMA_PRINTED_52 = "5/2bc^4 + 5ac^3d^2"

SIGMA_PRIME_TABLE = (
    ("a^3", "0", "a^2b", "0", "ab^2", "0", "b^3"),
    ("0", "a^2", "0", "ab", "0", "b^2", "0"),
    ("a^2c", "0", "a^2d", "0", "b^2c", "0", "b^2d"),
    ("0", "0", "0", "1", "0", "0", "0"),
    ("ac^2", "0", "bc^2", "0", "ad^2", "0", "bd^2"),
    ("0", "c^2", "0", "cd", "0", "d^2", "0"),
    ("c^3", "0", "c^2d", "0", "cd^2", "0", "d^3"),
)

# correction term of the non-reduced group action, linear in e1, e2, f1, f2
CORRECTION_TABLE = (
    ("0", "a^2e1", "0", "abe1", "0", "b^2e1", "0"),
    ("a^2f1", "0", "a^2f2", "0", "b^2f1", "0", "b^2f2"),
    ("0", "a^2e2", "0", "e1 + abe2", "0", "b^2e2", "0"),
    ("0", "0", "0", "f1f2", "0", "0", "0"),
    ("0", "c^2e1", "0", "cde1 + e2", "0", "d^2e1", "0"),
    ("c^2f1", "0", "c^2f2", "0", "d^2f1", "0", "d^2f2"),
    ("0", "c^2e2", "0", "cde2", "0", "d^2e2", "0"),
)

H_ACTION_TABLE = (
    ("1", "f2", "f1", "f1f2", "0", "0", "0"),
    ("f1", "1", "f2", "f1", "0", "0", "0"),
    ("f2", "f1", "1", "f2", "0", "0", "0"),
    ("0", "0", "0", "1 + f1f2", "0", "0", "0"),
    ("0", "0", "0", "f1", "1", "f2", "f1"),
    ("0", "0", "0", "f2", "f1", "1", "f2"),
    ("0", "0", "0", "f1f2", "f2", "f1", "1"),
)

_TERM = re.compile(r"^(\d+(?:/\d+)?)?((?:(?:[a-d]|e1|e2|f1|f2)(?:\^\d+)?)*)$")
_FACTOR = re.compile(r"([a-d]|e1|e2|f1|f2)(?:\^(\d+))?")


def parse_entry(text: str):
    """'5/2bc^4d + 5ac^3d^2' -> [(Fraction(5, 2), {'b': 1, 'c': 4, 'd': 1}), ...]."""
    out = []
    for raw in text.split("+"):
        term = raw.strip().replace(" ", "")
        if term == "0":
            continue
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse term {raw!r}")
        coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        powers = {}
        for var, exp in _FACTOR.findall(m.group(2)):
            powers[var] = powers.get(var, 0) + int(exp or 1)
        out.append((coeff, powers))
    return out


@lru_cache(maxsize=None)
def _parsed(table):
    return tuple(tuple(parse_entry(e) for e in row) for row in table)


def _evaluate_table(table, ring: Ring, values: dict) -> Matrix:
    rows = []
    for row in _parsed(table):
        out = []
        for terms in row:
            acc = ring.zero
            for coeff, powers in terms:
                t = ring.from_fraction(coeff) if coeff.denominator != 1 else ring.from_int(coeff.numerator)
                for v, k in powers.items():
                    t = ring.mul(t, ring.pow(values[v], k))
                acc = ring.add(acc, t)
            out.append(acc)
        rows.append(out)
    return Matrix(ring, rows)


# -- 2x2 group elements ------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement2:
    ring: Ring
    a: object
    b: object
    c: object
    d: object
    special: bool = False

    def __post_init__(self):
        R = self.ring
        det = self.det()
        if not R.is_unit(det):
            raise RingError("determinant is not a unit")
        if self.special and not R.eq(det, R.one):
            raise RingError("SL2 element must have determinant 1")

    @classmethod
    def from_ints(cls, ring, a, b, c, d, special=False):
        return cls(ring, *(ring.from_int(x) for x in (a, b, c, d)), special=special)

    def det(self):
        R = self.ring
        return R.sub(R.mul(self.a, self.d), R.mul(self.b, self.c))

    def matrix(self) -> Matrix:
        return Matrix(self.ring, [[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other: "GroupElement2") -> "GroupElement2":
        m = self.matrix() @ other.matrix()
        return GroupElement2(self.ring, m[0, 0], m[0, 1], m[1, 0], m[1, 1], self.special and other.special)

    def values(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def sigma(g: GroupElement2) -> Matrix:
    """The 7x7 projective representation of PGL2 on P^6 (2 must be invertible)."""
    R = g.ring
    if R.characteristic == 2 or not R.is_unit(R.from_int(2)):
        raise RingError("sigma needs 2 to be invertible")
    return _evaluate_table(SIGMA_TABLE, R, g.values())


def sigma_printed(g: GroupElement2) -> Matrix:
    """sigma with the (5, 2) entry exactly as printed (kept for comparison)."""
    table = tuple(tuple(SIGMA_PRINTED_52 if (i, j) == (5, 2) else e for j, e in enumerate(row))
                  for i, row in enumerate(SIGMA_TABLE))
    return _evaluate_table(table, g.ring, g.values())


def sigma_prime(g: GroupElement2) -> Matrix:
    """The 7x7 representation of SL2 on P^6 in characteristic 2."""
    R = g.ring
    if R.characteristic != 2:
        raise RingError("sigma_prime is defined in characteristic 2")
    if not R.eq(g.det(), R.one):
        raise RingError("sigma_prime needs determinant 1")
    return _evaluate_table(SIGMA_PRIME_TABLE, R, g.values())


def sl2_elements(field) -> list:
    """All elements of SL2 over a finite field."""
    out = []
    els = list(field.elements())
    for a in els:
        for b in els:
            for c in els:
                for d in els:
                    if field.eq(field.sub(field.mul(a, d), field.mul(b, c)), field.one):
                        out.append(GroupElement2(field, a, b, c, d, special=True))
    return out


# -- the PGL3 images and the stabilizer of the split conic ------------------------------

def embed_pgl2(g: GroupElement2) -> Matrix:
    """PGL2 -> PGL3 through the conic parametrization (p, q) -> (2p^2, q^2, -2pq)."""
    R = g.ring
    if not R.is_unit(R.from_int(2)):
        raise RingError("this embedding needs 2 to be invertible")
    a, b, c, d = g.a, g.b, g.c, g.d
    two = R.from_int(2)
    half = R.inv(two)
    m = R.mul
    return Matrix(R, [
        [m(a, a), m(two, m(b, b)), R.neg(m(two, m(a, b)))],
        [m(half, m(c, c)), m(d, d), R.neg(m(c, d))],
        [R.neg(m(a, c)), R.neg(m(two, m(b, d))), R.add(m(a, d), m(b, c))],
    ])


def embed_sl2_char2(g: GroupElement2) -> Matrix:
    R = g.ring
    return Matrix(R, [[g.a, g.b, R.zero], [g.c, g.d, R.zero], [R.zero, R.zero, R.one]])


STABILIZER_VARS = ("aaa", "aab", "aag", "aba", "abb", "abg", "aga", "agb", "agg")


def stabilizer_equations(ring: Ring = ZZ):
    """The five quadrics in the entries a_{xy} (x, y in alpha, beta, gamma)
    cutting out the projective stabilizer of the split form."""
    R = PolyRing(ring, STABILIZER_VARS)
    v = {n[1:]: R.gen(n) for n in STABILIZER_VARS}
    two = 2
    return [
        v["ag"] ** 2 - two * v["aa"] * v["ab"],
        v["bg"] ** 2 - two * v["ba"] * v["bb"],
        v["ag"] * v["gg"] - v["aa"] * v["gb"] - v["ga"] * v["ab"],
        v["bg"] * v["gg"] - v["ba"] * v["gb"] - v["ga"] * v["bb"],
        v["ag"] * v["bg"] - v["aa"] * v["bb"] - v["ba"] * v["ab"] + v["gg"] ** 2 - two * v["ga"] * v["gb"],
    ]


def stabilizer_values(A: Matrix) -> list:
    """Evaluate the stabilizer equations at a concrete 3x3 matrix."""
    R = A.ring
    vals = {STABILIZER_VARS[3 * i + j]: A[i, j] for i in range(3) for j in range(3)}
    return [p.evaluate(vals, R) if not isinstance(R, PolyRing) else p.substitute(
        {k: R.coerce(x) for k, x in vals.items()}, R.names) for p in stabilizer_equations(_scalar_ring(R))]


def _scalar_ring(R):
    return R.coeffs if isinstance(R, PolyRing) else R


def preserves_split_form(A: Matrix):
    """A Q A^T = lambda Q with lambda a unit, Q the split form.  Returns lambda or None."""
    from .forms import split_form
    R = A.ring
    Q = split_form(R).Q
    M = A @ Q @ A.T
    lam = M[2, 2]
    if not R.is_unit(lam):
        return None
    return lam if M == Q.scale(lam) else None


# -- the non-reduced group in characteristic 2 -----------------------------------------

@dataclass(frozen=True)
class GElementChar2:
    ring: Ring
    a: object
    b: object
    c: object
    d: object
    f1: object
    f2: object

    def __post_init__(self):
        R = self.ring
        if R.characteristic != 2:
            raise RingError("the non-reduced group lives in characteristic 2")
        if not (R.is_zero(R.mul(self.f1, self.f1)) and R.is_zero(R.mul(self.f2, self.f2))):
            raise RingError("f1 and f2 must square to zero")
        det = R.sub(R.mul(self.a, self.d), R.mul(self.b, self.c))
        if not R.eq(det, R.add(R.one, R.mul(self.f1, self.f2))):
            raise RingError("ad - bc must equal 1 + f1 f2")

    @property
    def e1(self):
        R = self.ring
        return R.add(R.mul(self.a, self.f2), R.mul(self.b, self.f1))

    @property
    def e2(self):
        R = self.ring
        return R.add(R.mul(self.c, self.f2), R.mul(self.d, self.f1))

    def matrix(self) -> Matrix:
        R = self.ring
        return Matrix(R, [[self.a, self.b, self.e1], [self.c, self.d, self.e2], [self.f1, self.f2, R.one]])

    def values(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d,
                "e1": self.e1, "e2": self.e2, "f1": self.f1, "f2": self.f2}

    @classmethod
    def from_matrix(cls, m: Matrix) -> "GElementChar2":
        """Normalize a 3x3 matrix of the group so its (3, 3) entry is 1."""
        R = m.ring
        s = R.inv(m[2, 2])
        n = m.scale(s)
        el = cls(R, n[0, 0], n[0, 1], n[1, 0], n[1, 1], n[2, 0], n[2, 1])
        if el.matrix() != n:
            raise RingError("matrix is not of the required shape")
        return el

    def __matmul__(self, other):
        return GElementChar2.from_matrix(self.matrix() @ other.matrix())


def g_char2_element(a, b, c, d, f1, f2, ring: Ring) -> GElementChar2:
    return GElementChar2(ring, a, b, c, d, f1, f2)


def g_char2_action(el: GElementChar2) -> Matrix:
    """The 7x7 action: the sigma_prime pattern plus the nilpotent correction."""
    R = el.ring
    vals = el.values()
    return _evaluate_table(SIGMA_PRIME_TABLE, R, vals) + _evaluate_table(CORRECTION_TABLE, R, vals)


def nilpotent_ring(names=("f1", "f2")) -> TruncatedPolyRing:
    """GF(2)[f1, f2]/(f1^2, f2^2)."""
    return TruncatedPolyRing(GF(2), {n: 2 for n in names})


def h_element(f1, f2, ring: Ring) -> GElementChar2:
    """The element [[1, f1, f2], [f2, 1, f1], [f1, f2, 1]] of H.  In the
    (a, b, c, d, f1, f2) parametrization of G this is a = d = 1, b = f1, c = f2."""
    return GElementChar2(ring, ring.one, f1, f2, ring.one, f1, f2)


def k_element(f, ring: Ring) -> GElementChar2:
    return h_element(f, f, ring)


def h_action_matrix(ring: Ring | None = None) -> Matrix:
    """The printed 7x7 matrix of the generic H element over GF(2)[f1, f2]/(f1^2, f2^2)."""
    R = ring or nilpotent_ring()
    return _evaluate_table(H_ACTION_TABLE, R, {"f1": R.gen("f1"), "f2": R.gen("f2")})


# -- actions on points and quadrics ----------------------------------------------------

def act_on_point(M: Matrix, point: Sequence, field: Ring | None = None):
    F = field or M.ring
    image = M @ list(point)
    return normalize(image, F)


def pullback(q: Polynomial, M: Matrix) -> Polynomial:
    """q(M x): the quadric composed with the linear map x -> M x."""
    names = coordinate_vars(q)
    if len(names) != M.nrows:
        raise ValueError("quadric and matrix sizes differ")
    ring = q.ring
    P = PolyRing(ring, names)
    x = [P.gen(v) for v in names]
    images = {}
    for i, v in enumerate(names):
        acc = P.zero
        for j in range(M.ncols):
            e = M[i, j]
            if not M.ring.is_zero(e):
                acc = acc + x[j] * P.from_element(e)
        images[v] = acc
    return q.substitute(images, P.names)


def coordinate_vars(q: Polynomial) -> list:
    """Variables of q that are not nilpotent scalars of a truncated ring."""
    caps = q.ring.caps if isinstance(q.ring, TruncatedPolyRing) else {}
    return [v for v in q.vars if v not in caps]


def preserves_quadric_span(act: Matrix, system: QuadricSystem) -> bool:
    """Each generator pulled back along ``act`` lies in the span of the generators."""
    names = [v for v in system.vars if not (isinstance(system.ring, TruncatedPolyRing) and v in system.ring.caps)]
    if len(names) != 7:
        raise ValueError("expected a system in 7 variables")
    R = act.ring
    if isinstance(R, TruncatedPolyRing):
        if not R.is_unit(determinant(act)):
            raise RingError("singular action matrix")
    elif R.is_zero(determinant(act)):
        raise RingError("singular action matrix")
    gens = [g.map_coefficients(R) if g.ring != R and not isinstance(R, TruncatedPolyRing) else g
            for g in system.generators]
    pulled = [pullback(g, act) for g in gens]
    return span_contains(gens, pulled, names, R)


def h_fixed_quadrics(ring: Ring | None = None):
    """Quadrics fixed by the generic H element: the squares a_i^2 and
    a1 a5 + a0 a3 + a3 a6."""
    R = ring or nilpotent_ring()
    P = PolyRing(R, [f"a{k}" for k in range(7)])
    a = [P.gen(f"a{k}") for k in range(7)]
    squares = [x * x for x in a]
    return squares + [a[1] * a[5] + a[0] * a[3] + a[3] * a[6]]


def is_fixed(q: Polynomial, M: Matrix) -> bool:
    return pullback(q, M) == q


def equal_up_to_scalar(M: Matrix, N: Matrix) -> bool:
    """Projective equality: compare after dividing by the first unit entry."""
    R = M.ring
    flat_m = [x for r in M.rows for x in r]
    flat_n = [x for r in N.rows for x in r]
    for x, y in zip(flat_m, flat_n):
        if R.is_unit(x):
            if not R.is_unit(y):
                return False
            s = R.mul(y, R.inv(x))
            return all(R.eq(R.mul(s, u), v) for u, v in zip(flat_m, flat_n))
        if not R.is_zero(x) or not R.is_zero(y):
            if not R.is_unit(y):
                continue
            return False
    return all(R.is_zero(v) for v in flat_n)
