"""Nets of alternating forms on a rank-5 module and ternary symmetric forms."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import (QQ, ZZ, FiniteField, Matrix, PolyRing, Ring, RingError,
                      determinant, pfaffian, rank, trace)
from .algebra.codec import ring_from_json
from .algebra.projective import normalize, projective_points

NET_LETTERS = ("a", "b", "c")
PAIRS = [(i, j) for i in range(5) for j in range(i + 1, 5)]


class DegenerateNet(ValueError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


@dataclass(frozen=True)
class AlternatingNet:
    """Three alternating 5x5 matrices; the net sends e_i^e_j to
    A_ij alpha + B_ij beta + C_ij gamma."""

    ring: Ring
    A: Matrix
    B: Matrix
    C: Matrix

    def __post_init__(self):
        for name, m in zip("ABC", self.matrices):
            if m.shape != (5, 5) or not m.is_alternating():
                raise ValueError(f"{name} is not an alternating 5x5 matrix")

    @property
    def matrices(self):
        return (self.A, self.B, self.C)

    def at(self, x, y, z) -> Matrix:
        """The alternating form xA + yB + zC."""
        R = self.ring
        return Matrix(R, [[R.add(R.add(R.mul(x, a), R.mul(y, b)), R.mul(z, c))
                           for a, b, c in zip(ra, rb, rc)]
                          for ra, rb, rc in zip(self.A.rows, self.B.rows, self.C.rows)])

    def map(self, f, ring) -> "AlternatingNet":
        return AlternatingNet(ring, *(m.map(f, ring) for m in self.matrices))

    def reduce(self, ring: Ring) -> "AlternatingNet":
        """Image under the natural map to ``ring`` (e.g. reduction mod p)."""
        return self.map(ring.coerce, ring)

    def coefficient_matrix(self) -> Matrix:
        """3x10 matrix of the linear map on the wedge square, columns e_i^e_j."""
        return Matrix(self.ring, [[m[i, j] for i, j in PAIRS] for m in self.matrices])

    def to_json(self) -> dict:
        enc = self.ring.encode
        return {"ring": self.ring.spec(),
                **{k: [[enc(x) for x in r] for r in m.rows] for k, m in zip("ABC", self.matrices)}}

    @classmethod
    def from_json(cls, d: dict) -> "AlternatingNet":
        ring = ring_from_json(d["ring"])
        return cls(ring, *(Matrix(ring, [[ring.decode(str(x)) for x in r] for r in d[k]]) for k in "ABC"))


@dataclass(frozen=True)
class TernarySymForm:
    """Symmetric bilinear form on a rank-3 module, given by its Gram matrix."""

    ring: Ring
    Q: Matrix

    def __post_init__(self):
        if self.Q.shape != (3, 3) or not self.Q.is_symmetric():
            raise ValueError("Q must be a symmetric 3x3 matrix")

    def det(self):
        return determinant(self.Q)

    def is_nondegenerate(self) -> bool:
        return self.ring.is_unit(self.det())

    def reduce(self, ring: Ring) -> "TernarySymForm":
        return TernarySymForm(ring, self.Q.map(ring.coerce, ring))

    def to_json(self) -> dict:
        return {"ring": self.ring.spec(), "Q": [[self.ring.encode(x) for x in r] for r in self.Q.rows]}

    @classmethod
    def from_json(cls, d: dict) -> "TernarySymForm":
        ring = ring_from_json(d["ring"])
        return cls(ring, Matrix(ring, [[ring.decode(str(x)) for x in r] for r in d["Q"]]))


@dataclass(frozen=True)
class BasisChange:
    """(U, W) in GL5 x GL3 acting by X -> U^T X U, then mixing A, B, C by W."""

    U: Matrix
    W: Matrix

    def compose(self, other: "BasisChange") -> "BasisChange":
        """The element acting as ``self`` after ``other``."""
        return BasisChange(other.U @ self.U, self.W @ other.W)


def _alt(ring, entries: dict) -> Matrix:
    m = [[ring.zero] * 5 for _ in range(5)]
    for (i, j), v in entries.items():
        v = ring.coerce(v)
        m[i - 1][j - 1] = v
        m[j - 1][i - 1] = ring.neg(v)
    return Matrix(ring, m)


def split_net(ring: Ring = ZZ) -> AlternatingNet:
    """The split net: alpha pairs e2^e5, e3^e4; beta pairs e1^e4, e2^e3;
    gamma pairs e1^e5, e2^e4."""
    A = _alt(ring, {(2, 5): -1, (3, 4): 1})
    B = _alt(ring, {(1, 4): -1, (2, 3): 1})
    C = _alt(ring, {(1, 5): -1, (2, 4): 1})
    return AlternatingNet(ring, A, B, C)


def split_form(ring: Ring = ZZ) -> TernarySymForm:
    return TernarySymForm(ring, Matrix.from_ints(ring, [[0, -1, 0], [-1, 0, 0], [0, 0, 1]]))


def generic_net(ring: Ring = ZZ):
    """Net with 30 independent indeterminates a_ij, b_ij, c_ij (i < j) over
    ``ring``; returns (net, polynomial ring)."""
    names = [f"{l}{i + 1}{j + 1}" for l in NET_LETTERS for i, j in PAIRS]
    R = PolyRing(ring, names)
    mats = []
    for l in NET_LETTERS:
        m = [[R.zero] * 5 for _ in range(5)]
        for i, j in PAIRS:
            g = R.gen(f"{l}{i + 1}{j + 1}")
            m[i][j] = g
            m[j][i] = -g
        mats.append(Matrix(R, m))
    return AlternatingNet(R, *mats), R


def variable_groups():
    return [[f"{l}{i + 1}{j + 1}" for i, j in PAIRS] for l in NET_LETTERS]


# -- rank-4 certification --------------------------------------------------------

def principal_pfaffians(net: AlternatingNet):
    """The five 4x4 principal Pfaffians of xA + yB + zC as quadratic forms in
    x, y, z (index k deleted for the k-th entry)."""
    R = PolyRing(net.ring, ["x", "y", "z"])
    x, y, z = R.gens()
    lift = R.from_element
    W = Matrix(R, [[x * lift(a) + y * lift(b) + z * lift(c) for a, b, c in zip(ra, rb, rc)]
                   for ra, rb, rc in zip(net.A.rows, net.B.rows, net.C.rows)])
    return [pfaffian(W.delete(k, k)) for k in range(5)]


def _macaulay_full(quadrics, field) -> bool:
    """True iff the degree-4 part of the ideal is everything, i.e. the quadrics
    have no common zero over an algebraic closure."""
    monos2 = [e for e in product(range(3), repeat=3) if sum(e) == 2]
    monos4 = sorted(e for e in product(range(5), repeat=3) if sum(e) == 4)
    col = {e: k for k, e in enumerate(monos4)}
    rows = []
    for f in quadrics:
        fd = f.as_dict()
        for m in monos2:
            row = [field.zero] * len(monos4)
            for e, c in fd.items():
                row[col[tuple(a + b for a, b in zip(e, m))]] = c
            rows.append(row)
    if not rows:
        return False
    return rank(Matrix(field, rows)) == len(monos4)


def is_rank4_net(net: AlternatingNet) -> bool:
    """True iff xA + yB + zC has rank 4 at every geometric point of P^2.

    The five principal Pfaffians are conics; they have no common zero over the
    algebraic closure exactly when they generate every quartic, which is a rank
    computation over the base field.
    """
    if not net.ring.is_field:
        raise RingError("rank-4 certification needs a field; reduce the net first")
    return _macaulay_full(principal_pfaffians(net), net.ring)


def rank4_by_enumeration(net: AlternatingNet, max_degree: int = 4):
    """Oracle: search P^2(F_{q^k}), k <= max_degree, for a point where all five
    principal Pfaffians vanish.  Returns the first such point or None."""
    from .algebra import field_extension
    from .algebra.projective import VectorField, projective_array
    import numpy as np
    F = net.ring
    if not isinstance(F, FiniteField):
        raise RingError("enumeration needs a finite field")
    pfs = principal_pfaffians(net)
    for k in range(1, max_degree + 1):
        E, emb = field_extension(F, k)
        pts = projective_array(E, 2)
        vf = VectorField(E)
        cols = [pts[:, i] for i in range(3)]
        alive = np.ones(len(pts), dtype=bool)
        for f in pfs:
            g = f.map_coefficients(E) if E != F else f
            alive &= vf.eval_poly(g, cols) == 0
        hit = np.flatnonzero(alive)
        if len(hit):
            return k, tuple(int(v) for v in pts[hit[0]])
    return None


def rank4_witness(net: AlternatingNet):
    """A rational point of P^2 where xA + yB + zC drops rank, if one is found
    (exhaustive over finite fields, small heights over Q and Z)."""
    R = net.ring
    pfs = principal_pfaffians(net)
    if isinstance(R, FiniteField):
        candidates = projective_points(R, 2)
    else:
        def gen():
            seen = set()
            for h in range(0, 6):
                for pt in product(range(-h, h + 1), repeat=3):
                    if max(map(abs, pt)) != h or not any(pt):
                        continue
                    n = normalize([QQ.coerce(v) for v in pt], QQ)
                    if n not in seen:
                        seen.add(n)
                        yield n
        candidates = sorted(gen(), key=lambda p: (max(abs(v.numerator) + v.denominator for v in p), p))
    for pt in candidates:
        vals = dict(zip("xyz", pt))
        if all(R.is_zero(f.evaluate(vals, R if isinstance(R, FiniteField) else QQ)) for f in pfs):
            return tuple(pt)
    return None


def certify_rank4(net: AlternatingNet):
    """Raise DegenerateNet unless the net is rank 4 everywhere; integer nets are
    certified over Q."""
    n = net if net.ring.is_field else net.reduce(QQ)
    if not is_rank4_net(n):
        raise DegenerateNet("rank-4 certification failed", rank4_witness(n))


# -- group action ----------------------------------------------------------------

def apply_basis_change(net: AlternatingNet, g: BasisChange) -> AlternatingNet:
    R = net.ring
    U, W = g.U, g.W
    if not R.is_unit(determinant(U)) or not R.is_unit(determinant(W)):
        raise RingError("basis change is not invertible")
    moved = [U.T @ X @ U for X in net.matrices]
    out = []
    for i in range(3):
        acc = Matrix.zeros(R, 5)
        for j in range(3):
            acc = acc + moved[j].scale(W[i, j])
        out.append(acc)
    return AlternatingNet(R, *out)


def transform_form(q: TernarySymForm, T: Matrix, scalar=None) -> TernarySymForm:
    """T^T Q T (times ``scalar`` if given)."""
    m = T.T @ q.Q @ T
    if scalar is not None:
        m = m.scale(scalar)
    return TernarySymForm(q.ring, m)


def similar_forms(q1: TernarySymForm, q2: TernarySymForm):
    """Search GL3(F_q) x F_q^* for (T, lam) with T^T Q1 T = lam Q2.

    Columns of T are chosen one at a time in lexicographic order of their
    codes and lam runs upward from 1, so the witness is deterministic.
    Returns (T, lam) or None.
    """
    F = q1.ring
    if not isinstance(F, FiniteField):
        raise RingError("similarity search is over finite fields")
    if F.q > 9:
        raise RingError("similarity search is limited to q <= 9")
    Q1, Q2 = q1.Q, q2.Q
    vecs = list(product(range(F.q), repeat=3))

    def pair(u, v):
        return F.sum(F.mul(u[i], F.mul(Q1[i, j], v[j])) for i in range(3) for j in range(3)
                     if u[i] and v[j] and Q1[i, j])

    G = {(u, v): pair(u, v) for u in vecs for v in vecs} if F.q <= 5 else None
    pr = (lambda u, v: G[(u, v)]) if G is not None else pair
    units = [x for x in range(1, F.q)]
    for lam in units:
        target = [[F.mul(lam, Q2[i, j]) for j in range(3)] for i in range(3)]
        c1 = [u for u in vecs if any(u) and pr(u, u) == target[0][0]]
        for t1 in c1:
            c2 = [u for u in vecs if pr(u, u) == target[1][1] and pr(t1, u) == target[0][1]]
            for t2 in c2:
                if rank(Matrix(F, [t1, t2])) < 2:
                    continue
                for t3 in vecs:
                    if (pr(t3, t3) == target[2][2] and pr(t1, t3) == target[0][2]
                            and pr(t2, t3) == target[1][2]):
                        T = Matrix(F, [list(r) for r in zip(t1, t2, t3)])
                        if determinant(T):
                            return T, lam
    return None


def signature_pair(q: TernarySymForm):
    """(number of positive, number of negative) eigenvalues of a nondegenerate
    rational form, by Descartes' rule on the characteristic polynomial (exact
    because a symmetric matrix has only real eigenvalues)."""
    if q.ring not in (ZZ, QQ):
        raise RingError("signature needs an integral or rational form")
    Q = q.Q.map(Fraction, QQ)
    c2 = -trace(Q)
    c1 = sum(Q[i, i] * Q[j, j] - Q[i, j] * Q[j, i] for i in range(3) for j in range(i + 1, 3))
    c0 = -determinant(Q)
    if c0 == 0:
        raise ValueError("degenerate form has no signature pair")
    coeffs = [1, c2, c1, c0]

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(a != b for a, b in zip(signs, signs[1:]))

    pos = changes(coeffs)
    neg = changes([c * (-1) ** (3 - k) for k, c in enumerate(coeffs)])
    return pos, neg
