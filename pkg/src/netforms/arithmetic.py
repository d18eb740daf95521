"""Local-global arithmetic of ternary forms over the rationals: Hilbert
symbols, local splitting, good reduction and the count of forms with good
reduction outside a finite set of primes."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable

import numpy as np

from .algebra import QQ, ZZ, Matrix, determinant
from .forms import TernarySymForm, signature_pair, split_form

INFINITY = "inf"
SPLIT, NONSPLIT = "split", "nonsplit"
CLASS_SPLIT_MODEL, CLASS_DEFINITE = "class_split_model", "class_definite"
SEARCH_BOUND = 200
SPOT_CHECK_PRIMES = 5


def parse_place(text):
    if isinstance(text, int):
        return _check_place(text)
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "oo", "real"):
        return INFINITY
    return _check_place(int(t))


def _check_place(p):
    if p == INFINITY:
        return p
    if p < 2 or not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    return p


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def prime_factors(n: int) -> list:
    n = abs(n)
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _next_primes(avoid: Iterable, count: int) -> list:
    avoid = set(avoid)
    out, n = [], 3
    while len(out) < count:
        if is_prime(n) and n not in avoid:
            out.append(n)
        n += 2
    return out


def _as_integer(x) -> int:
    """An integer in the same square class as the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("Hilbert symbol of zero")
    return x.numerator * x.denominator


def _split_valuation(n: int, p: int):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a, b, v) -> int:
    """(a, b)_v for nonzero rationals a, b and a place v (prime or INFINITY)."""
    a, b = _as_integer(a), _as_integer(b)
    if v == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    p = v
    alpha, u = _split_valuation(a, p)
    beta, w = _split_valuation(b, p)
    if p != 2:
        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        return sign * legendre(u, p) ** beta * legendre(w, p) ** alpha

    def eps(n):
        return ((n - 1) // 2) % 2

    def omega(n):
        return ((n * n - 1) // 8) % 2

    e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
    return -1 if e % 2 else 1


# -- brute-force oracle ---------------------------------------------------------------

def _reduce_square_class(n: int, p: int) -> int:
    while n % (p * p) == 0:
        n //= p * p
    return n


def _valuation_array(arr, p, cap):
    out = np.zeros(arr.shape, dtype=np.int64)
    cur = arr.copy()
    for _ in range(cap):
        mask = cur % p == 0
        out += mask
        cur = np.where(mask, cur // p, cur)
    return out


def hilbert_oracle(a, b, v, max_modulus: int = 6_000_000) -> int:
    """Decide whether a x^2 + b y^2 = z^2 has a nontrivial solution over Q_v
    by searching primitive solutions modulo p^N.

    No primitive solution mod p^N rules out a p-adic solution.  A solution
    with partial derivatives of valuation e lifts by Hensel's lemma once
    N >= 2e + 1.
    """
    a, b = _as_integer(a), _as_integer(b)
    if v == INFINITY:
        return 1 if a > 0 or b > 0 else -1
    p = v
    a, b = _reduce_square_class(a, p), _reduce_square_class(b, p)
    N = 1
    while p ** (2 * N) <= max_modulus:
        m = p ** N
        zs = np.arange(m, dtype=np.int64)
        squares = (zs * zs) % m
        # smallest-valuation root for each square residue
        zval = _valuation_array(np.where(zs == 0, m, zs), p, N)
        best = np.full(m, N + 1, dtype=np.int64)
        np.minimum.at(best, squares, zval)
        x = np.arange(m, dtype=np.int64)[:, None]
        y = np.arange(m, dtype=np.int64)[None, :]
        r = (a % m * (x * x % m) + b % m * (y * y % m)) % m
        primitive = (x % p != 0) | (y % p != 0)
        solvable = (best[r] <= N) & primitive
        if not solvable.any():
            return -1
        v2 = 1 if p == 2 else 0
        va = _split_valuation(a, p)[0] + v2
        vb = _split_valuation(b, p)[0] + v2
        vx = _valuation_array(np.where(x == 0, m, x), p, N) + va
        vy = _valuation_array(np.where(y == 0, m, y), p, N) + vb
        vz = best[r] + v2
        e = np.minimum(np.minimum(vx, vy), vz)
        if (solvable & (N >= 2 * e + 1)).any():
            return 1
        N += 1
    raise RuntimeError(f"oracle undecided for ({a}, {b}) at {p}")


# -- local classes ---------------------------------------------------------------------

def _rational_matrix(q: TernarySymForm):
    return [[Fraction(x) for x in row] for row in q.Q.rows]


def diagonalize(q: TernarySymForm) -> list:
    """Diagonal entries of a congruent diagonal form, by symmetric elimination."""
    m = _rational_matrix(q)
    n = 3
    diag = []
    for i in range(n):
        if m[i][i] == 0:
            j = next((j for j in range(i + 1, n) if m[j][j] != 0), None)
            if j is not None:
                m[i], m[j] = m[j], m[i]
                for row in m:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if m[i][j] != 0), None)
                if j is None:
                    raise ValueError("degenerate form")
                # e_i -> e_i + e_j gives value 2 m_ij
                for k in range(n):
                    m[i][k] += m[j][k]
                for k in range(n):
                    m[k][i] += m[k][j]
        piv = m[i][i]
        diag.append(piv)
        for j in range(i + 1, n):
            f = m[j][i] / piv
            for k in range(n):
                m[j][k] -= f * m[i][k]
            for k in range(n):
                m[k][j] -= f * m[k][i]
    if any(d == 0 for d in diag):
        raise ValueError("degenerate form")
    return diag


def _check_form(q: TernarySymForm):
    if determinant(Matrix(QQ, _rational_matrix(q))) == 0:
        raise ValueError("degenerate form")


def local_class(q: TernarySymForm, v) -> str:
    """Whether the conic of q has a point over Q_v."""
    _check_form(q)
    d1, d2, d3 = diagonalize(q)
    # d1 x^2 + d2 y^2 + d3 z^2 = 0  <=>  (-d1/d3) x^2 + (-d2/d3) y^2 = z^2
    return SPLIT if hilbert_symbol(-d1 / d3, -d2 / d3, v) == 1 else NONSPLIT


def nonsplit_places(q: TernarySymForm) -> frozenset:
    """All places where q is nonsplit (only primes dividing 2 * the diagonal
    entries can occur)."""
    d = diagonalize(q)
    cands = {2, INFINITY}
    for x in d:
        cands.update(prime_factors(x.numerator))
        cands.update(prime_factors(x.denominator))
    return frozenset(v for v in cands if local_class(q, v) == NONSPLIT)


def good_reduction(q: TernarySymForm, p: int) -> bool:
    _check_form(q)
    if p == 2:
        return True
    return local_class(q, p) == SPLIT


def diagonal_form(a, b, c) -> TernarySymForm:
    ring = ZZ if all(Fraction(x).denominator == 1 for x in (a, b, c)) else QQ
    conv = int if ring == ZZ else Fraction
    return TernarySymForm(ring, Matrix(ring, [[conv(a), 0, 0], [0, conv(b), 0], [0, 0, conv(c)]]))


def obstruction_form(u1, u2) -> TernarySymForm:
    """-u1 x x' - u2 y y' + z z': nonsplit exactly where (u1, u2) = -1."""
    return diagonal_form(-u1, -u2, 1)


# -- counting forms with good reduction -----------------------------------------------

def _place_key(v):
    return (1, 0) if v == INFINITY else (0, v)


@dataclass(frozen=True)
class PlaceVector:
    support: frozenset

    def value(self, v) -> Fraction:
        return Fraction(1, 2) if v in self.support else Fraction(0)

    def is_global(self) -> bool:
        return len(self.support) % 2 == 0

    def to_json(self):
        return {str(v): "1/2" for v in sorted(self.support, key=_place_key)}


@dataclass
class ShafarevichResult:
    primes: tuple
    places: tuple
    count: int
    patterns: list
    representatives: list
    verified: bool
    warnings: list = field(default_factory=list)

    def to_json(self):
        return {
            "primes": list(self.primes),
            "places": [str(v) for v in self.places],
            "r": len(self.places),
            "count": self.count,
            "expected": 2 ** (len(self.places) - 1),
            "verified": self.verified,
            "warnings": self.warnings,
            "representatives": [
                {"nonsplit": pv.to_json(), "form": [[str(x) for x in row] for row in f.Q.rows]}
                for pv, f in zip(self.patterns, self.representatives)],
        }


def shafarevich_count_abstract(r: int) -> int:
    if r < 1:
        raise ValueError("need at least one place")
    return 2 ** (r - 1)


def _search_order(bound):
    for n in range(1, bound + 1):
        yield n
        yield -n


def _find_representatives(places, wanted):
    """Search <-a, -b, 1>, whose nonsplit places are where (a, b) = -1."""
    allowed = set(places)
    factors = lru_cache(maxsize=None)(prime_factors)
    found = {frozenset(): split_form(ZZ)}
    for a in _search_order(SEARCH_BOUND):
        if len(found) == len(wanted):
            break
        for b in _search_order(abs(a)):
            primes = set(factors(a)) | set(factors(b)) | {2}
            if not primes <= allowed and any(
                    hilbert_symbol(a, b, p) == -1 for p in primes - allowed):
                continue
            bad = frozenset(v for v in primes | {INFINITY} if hilbert_symbol(a, b, v) == -1)
            if bad not in found:
                found[bad] = obstruction_form(a, b)
                if len(found) == len(wanted):
                    break
    return found


def shafarevich_count(primes: Iterable[int]) -> ShafarevichResult:
    """Forms over Q with good reduction outside the given odd primes, one per
    zero-sum vector of local invariants on S, the prime 2 and the real place."""
    notes = []
    S = sorted(set(int(p) for p in primes))
    for p in S:
        _check_place(p)
    if 2 in S:
        S.remove(2)
        notes.append("2 is always a place of bad-reduction freedom; dropped from the input")
        warnings.warn(notes[-1])
    places = tuple(S) + (2, INFINITY)
    wanted = [frozenset(c) for k in range(0, len(places) + 1, 2) for c in combinations(places, k)]
    found = _find_representatives(places, wanted)
    patterns, reps = [], []
    verified = True
    outside = _next_primes(places, SPOT_CHECK_PRIMES)
    for w in sorted(wanted, key=lambda s: (len(s), sorted(map(str, s)))):
        q = found.get(w)
        if q is None:
            verified = False
            continue
        ok = all((local_class(q, v) == NONSPLIT) == (v in w) for v in places)
        ok &= all(local_class(q, p) == SPLIT for p in outside)
        verified &= ok
        patterns.append(PlaceVector(w))
        reps.append(q)
    verified &= len({p.support for p in patterns}) == len(patterns) == len(wanted)
    return ShafarevichResult(tuple(S), places, len(patterns), patterns, reps, verified, notes)


def z_classification(q: TernarySymForm) -> str:
    """The two similarity classes of unimodular integral ternary forms."""
    d = determinant(Matrix(QQ, _rational_matrix(q)))
    if abs(d) != 1:
        raise ValueError("form is not unimodular")
    pos, neg = signature_pair(TernarySymForm(QQ, Matrix(QQ, _rational_matrix(q))))
    if {pos, neg} == {2, 1}:
        return CLASS_SPLIT_MODEL
    return CLASS_DEFINITE
