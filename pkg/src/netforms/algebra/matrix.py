"""Dense matrices over any ring object, with exact determinant, adjugate,
Pfaffian and row reduction."""
from __future__ import annotations

from itertools import combinations
from typing import Callable, Sequence

from .rings import Ring, RingError

LAPLACE_LIMIT = 6


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: Ring, rows: Sequence[Sequence], coerce=False):
        rows = [list(r) for r in rows]
        if coerce:
            rows = [[ring.coerce(x) for x in r] for r in rows]
        self.ring = ring
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        if any(len(r) != self.ncols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_ints(cls, ring, rows):
        return cls(ring, rows, coerce=True)

    @classmethod
    def zeros(cls, ring, n, m=None):
        m = n if m is None else m
        return cls(ring, [[ring.zero] * m for _ in range(n)])

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, ring, entries):
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else ring.zero for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def tolist(self):
        return [list(r) for r in self.rows]

    def __iter__(self):
        return iter(self.rows)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ring, list(zip(*self.rows)) if self.rows else [])

    def map(self, f: Callable, ring: Ring | None = None) -> "Matrix":
        return Matrix(ring or self.ring, [[f(x) for x in r] for r in self.rows])

    def __add__(self, other):
        R = self.ring
        return Matrix(R, [[R.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        R = self.ring
        return Matrix(R, [[R.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        R = self.ring
        return Matrix(R, [[R.neg(a) for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        R = self.ring
        return Matrix(R, [[R.mul(c, a) for a in r] for r in self.rows])

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            R = self.ring
            cols = other.T.rows
            out = []
            for r in self.rows:
                out.append([_dot(R, r, c) for c in cols])
            return Matrix(R, out)
        # matrix times vector
        R = self.ring
        return [_dot(R, r, other) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Matrix) or self.shape != other.shape:
            return False
        eq = self.ring.eq
        return all(eq(a, b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self):
        z = self.ring.is_zero
        return all(z(x) for r in self.rows for x in r)

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows])

    def delete(self, i=None, j=None) -> "Matrix":
        rows = [k for k in range(self.nrows) if k != i]
        cols = [k for k in range(self.ncols) if k != j]
        return self.submatrix(rows, cols)

    def is_square(self):
        return self.nrows == self.ncols

    def is_symmetric(self):
        return self.is_square() and all(
            self.ring.eq(self.rows[i][j], self.rows[j][i])
            for i in range(self.nrows) for j in range(i))

    def is_alternating(self):
        R = self.ring
        return self.is_square() and all(R.is_zero(self.rows[i][i]) for i in range(self.nrows)) and all(
            R.is_zero(R.add(self.rows[i][j], self.rows[j][i]))
            for i in range(self.nrows) for j in range(i))

    def __repr__(self):
        fmt = getattr(self.ring, "format", str)
        body = "; ".join(", ".join(_fmt(fmt, x) for x in r) for r in self.rows)
        return f"Matrix[{body}]"


def _fmt(fmt, x):
    try:
        return fmt(x)
    except Exception:
        return str(x)


def _dot(R, a, b):
    acc = R.zero
    for x, y in zip(a, b):
        if R.is_zero(x) or R.is_zero(y):
            continue
        acc = R.add(acc, R.mul(x, y))
    return acc


# -- determinants ----------------------------------------------------------------

def _laplace(m: Matrix):
    """Cofactor expansion with minors memoized over column subsets (n 2^(n-1)
    products)."""
    R = m.ring
    n = m.nrows
    if n == 0:
        return R.one
    rows = m.rows
    prev = {(j,): rows[n - 1][j] for j in range(n)}
    for k in range(2, n + 1):
        r = rows[n - k]
        cur = {}
        for S in combinations(range(n), k):
            acc = R.zero
            for idx, j in enumerate(S):
                a = r[j]
                if R.is_zero(a):
                    continue
                sub = prev[S[:idx] + S[idx + 1:]]
                if R.is_zero(sub):
                    continue
                t = R.mul(a, sub)
                acc = R.sub(acc, t) if idx & 1 else R.add(acc, t)
            cur[S] = acc
        prev = cur
    return prev[tuple(range(n))]


def _bareiss(m: Matrix):
    R = m.ring
    n = m.nrows
    a = [list(r) for r in m.rows]
    sign = 1
    prev = R.one
    for k in range(n - 1):
        if R.is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not R.is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return R.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = R.sub(R.mul(a[i][j], a[k][k]), R.mul(a[i][k], a[k][j]))
                a[i][j] = R.exact_div(num, prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else R.neg(d)


def determinant(m: Matrix):
    """Exact determinant: memoized cofactor expansion up to size 6, fraction-free
    Bareiss elimination above (cofactor expansion again over non-domains)."""
    if not m.is_square():
        raise ValueError(f"determinant of non-square {m.shape} matrix")
    if m.nrows <= LAPLACE_LIMIT or not m.ring.is_domain:
        return _laplace(m)
    return _bareiss(m)


def adjugate(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("adjugate of non-square matrix")
    R = m.ring
    n = m.nrows
    if n == 1:
        return Matrix(R, [[R.one]])
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = determinant(m.delete(j, i))
            out[i][j] = R.neg(c) if (i + j) & 1 else c
    return Matrix(R, out)


def pfaffian(m: Matrix):
    """Pfaffian of an alternating matrix, expanding along the first index."""
    if not m.is_alternating():
        raise ValueError("pfaffian needs an alternating matrix")
    R = m.ring
    n = m.nrows
    if n & 1:
        return R.zero
    rows = m.rows
    memo = {(): R.one}

    def pf(S):
        hit = memo.get(S)
        if hit is not None:
            return hit
        i0 = S[0]
        acc = R.zero
        for k in range(1, len(S)):
            a = rows[i0][S[k]]
            if R.is_zero(a):
                continue
            t = R.mul(a, pf(S[1:k] + S[k + 1:]))
            acc = R.add(acc, t) if k & 1 else R.sub(acc, t)
        memo[S] = acc
        return acc

    return pf(tuple(range(n)))


def trace(m: Matrix):
    return m.ring.sum(m.rows[i][i] for i in range(m.nrows))


# -- row reduction ---------------------------------------------------------------

def rref(m: Matrix):
    """Reduced row echelon form over a field, or over a local ring provided every
    pivot can be taken to be a unit.  Returns (matrix, pivot columns)."""
    R = m.ring
    a = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = None
        for i in range(r, nr):
            if R.is_unit(a[i][c]):
                piv = i
                break
        if piv is None:
            # over a local ring a column of non-units is left free; a leftover
            # nonzero row at the end means the row module is not free
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = R.inv(a[r][c])
        a[r] = [R.mul(inv, x) for x in a[r]]
        for i in range(nr):
            if i != r and not R.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(not R.is_zero(x) for row in a[r:] for x in row):
        raise RingError("row reduction needs a unit pivot")
    return Matrix(R, a) if a else m, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix) -> list:
    """Basis of {x : m x = 0} as lists."""
    R = m.ring
    red, piv = rref(m)
    free = [c for c in range(m.ncols) if c not in piv]
    basis = []
    for f in free:
        v = [R.zero] * m.ncols
        v[f] = R.one
        for i, c in enumerate(piv):
            v[c] = R.neg(red.rows[i][f])
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence):
    """One solution x of m x = b, or None."""
    R = m.ring
    aug = Matrix(R, [list(r) + [bi] for r, bi in zip(m.rows, b)])
    red, piv = rref(aug)
    if m.ncols in piv:
        return None
    x = [R.zero] * m.ncols
    for i, c in enumerate(piv):
        x[c] = red.rows[i][m.ncols]
    return x


def inverse(m: Matrix) -> Matrix:
    R = m.ring
    n = m.nrows
    aug = Matrix(R, [list(r) + [R.one if i == j else R.zero for j in range(n)] for i, r in enumerate(m.rows)])
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return Matrix(R, [r[n:] for r in red.rows])


def span_coordinates(vectors: Sequence[Sequence], v: Sequence, ring: Ring):
    """Coefficients expressing ``v`` in the span of ``vectors`` or None."""
    if not vectors:
        return [] if all(ring.is_zero(x) for x in v) else None
    m = Matrix(ring, [list(col) for col in zip(*vectors)])
    return solve(m, list(v))
