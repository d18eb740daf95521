"""Sparse multivariate polynomials over the rings in :mod:`rings`.

Monomials are packed into one integer: a 16-bit field per variable and the
total degree in the top field.  Monomial multiplication is then integer
addition, and comparing packed integers is graded-lex comparison in the
declared variable order.
"""
from __future__ import annotations

import contextvars
import os
from typing import Iterable, Mapping, Sequence

from .rings import FiniteField, IntegerRing, RationalField, Ring, RingError

WIDTH = 16
MASK = (1 << WIDTH) - 1
MAX_DEGREE = MASK

DEFAULT_TERM_BUDGET = 10 ** 8


class BudgetExceeded(RuntimeError):
    pass


class TermBudget:
    """Cap on term-pair multiplications, shared by everything run inside it.

    The cap defaults to ``QF_TERM_BUDGET`` from the environment, else 1e8.
    """

    _current: contextvars.ContextVar = contextvars.ContextVar("term_budget", default=None)

    def __init__(self, limit: int | None = None):
        if limit is None:
            limit = int(os.environ.get("QF_TERM_BUDGET", DEFAULT_TERM_BUDGET))
        self.limit = limit
        self.used = 0

    def charge(self, n: int):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"term budget of {self.limit} exceeded ({self.used} term products)")

    def __enter__(self):
        self._token = self._current.set(self)
        return self

    def __exit__(self, *exc):
        self._current.reset(self._token)
        return False


def _charge(n):
    b = TermBudget._current.get()
    if b is not None:
        b.charge(n)


def _kind(ring: Ring) -> str:
    if isinstance(ring, (IntegerRing, RationalField)):
        return "native"
    if isinstance(ring, FiniteField) and ring.degree == 1:
        return "modp"
    return "generic"


class Layout:
    """Bit layout for a tuple of variable names."""

    __slots__ = ("vars", "n", "index", "deg_shift")

    _cache: dict = {}

    def __new__(cls, names: Sequence[str]):
        names = tuple(names)
        hit = cls._cache.get(names)
        if hit is not None:
            return hit
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self = object.__new__(cls)
        self.vars = names
        self.n = len(names)
        self.index = {v: i for i, v in enumerate(names)}
        self.deg_shift = WIDTH * self.n
        cls._cache[names] = self
        return self

    def shift(self, i):
        return WIDTH * (self.n - 1 - i)

    def pack(self, exps) -> int:
        m = 0
        d = 0
        for e in exps:
            if e < 0 or e > MAX_DEGREE:
                raise ValueError(f"exponent {e} out of range")
            m = (m << WIDTH) | e
            d += e
        if d > MAX_DEGREE:
            raise OverflowError("total degree too large")
        return m | (d << self.deg_shift)

    def unpack(self, m) -> tuple:
        out = [0] * self.n
        for i in range(self.n - 1, -1, -1):
            out[i] = m & MASK
            m >>= WIDTH
        return tuple(out)

    def degree(self, m) -> int:
        return m >> self.deg_shift


def _scalar_ring(ring):
    from .truncated import TruncatedPolyRing
    return ring.base if isinstance(ring, TruncatedPolyRing) else ring


def _caps_for(ring, layout):
    from .truncated import TruncatedPolyRing
    if not isinstance(ring, TruncatedPolyRing):
        return None
    caps = []
    for v, c in ring.caps.items():
        if v not in layout.index:
            raise ValueError(f"truncated variable {v} missing from {layout.vars}")
        caps.append((layout.shift(layout.index[v]), c))
    return tuple(caps)


class Polynomial:
    """Immutable sparse polynomial.  ``ring`` is the coefficient ring; when it is
    a :class:`TruncatedPolyRing` its variables are part of ``vars`` and their
    exponents are capped."""

    __slots__ = ("ring", "base", "layout", "_t", "_caps", "_kind")

    def __init__(self, ring: Ring, names: Sequence[str], terms: Mapping | None = None, *,
                 packed=False, coerce=True):
        self.ring = ring
        self.base = _scalar_ring(ring)
        self.layout = Layout(names)
        self._caps = _caps_for(ring, self.layout)
        self._kind = _kind(self.base)
        t = {}
        if terms:
            zero = self.base.is_zero
            conv = self.base.coerce if coerce else (lambda c: c)
            if packed:
                for m, c in terms.items():
                    if not zero(c):
                        t[m] = c
            else:
                for e, c in terms.items():
                    c = conv(c)
                    if zero(c):
                        continue
                    m = self.layout.pack(e)
                    if self._caps and self._capped(m):
                        continue
                    t[m] = self.base.add(t[m], c) if m in t else c
                t = {m: c for m, c in t.items() if not zero(c)}
        self._t = t

    # -- construction helpers ---------------------------------------------------
    @classmethod
    def _raw(cls, ring, layout, t):
        self = object.__new__(cls)
        self.ring = ring
        self.base = _scalar_ring(ring)
        self.layout = layout
        self._caps = _caps_for(ring, layout)
        self._kind = _kind(self.base)
        self._t = t
        return self

    @classmethod
    def constant(cls, ring, names, c, coerce=True):
        if coerce:
            c = _scalar_ring(ring).coerce(c)
        layout = Layout(names)
        t = {} if _scalar_ring(ring).is_zero(c) else {0: c}
        return cls._raw(ring, layout, t)

    @classmethod
    def variable(cls, ring, names, name, coeff=1):
        layout = Layout(names)
        i = layout.index[name]
        exps = [0] * layout.n
        exps[i] = 1
        return cls(ring, names, {tuple(exps): coeff})

    @property
    def vars(self) -> tuple:
        return self.layout.vars

    def _capped(self, m) -> bool:
        for s, c in self._caps:
            if (m >> s) & MASK >= c:
                return True
        return False

    # -- inspection -------------------------------------------------------------
    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def terms(self):
        """(exponent tuple, coefficient) pairs in descending graded-lex order."""
        un = self.layout.unpack
        return [(un(m), self._t[m]) for m in sorted(self._t, reverse=True)]

    def as_dict(self) -> dict:
        un = self.layout.unpack
        return {un(m): c for m, c in self._t.items()}

    def coefficient(self, exps) -> object:
        return self._t.get(self.layout.pack(exps), self.base.zero)

    def constant_term(self):
        return self._t.get(0, self.base.zero)

    def is_constant(self) -> bool:
        return all(m == 0 for m in self._t)

    def total_degree(self) -> int:
        if not self._t:
            return -1
        return max(self._t) >> self.layout.deg_shift

    def degrees(self) -> set:
        return {m >> self.layout.deg_shift for m in self._t}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def multidegrees(self, groups: Sequence[Iterable[str]]) -> set:
        """Set of degree vectors of the terms with respect to variable groups."""
        idx = [[self.layout.index[v] for v in g if v in self.layout.index] for g in groups]
        out = set()
        for e in self.as_dict():
            out.add(tuple(sum(e[i] for i in g) for g in idx))
        return out

    def variables_used(self) -> tuple:
        used = [False] * self.layout.n
        for e in self.as_dict():
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(v for v, u in zip(self.vars, used) if u)

    # -- variable bookkeeping ---------------------------------------------------
    def with_vars(self, names: Sequence[str]) -> "Polynomial":
        names = tuple(names)
        if names == self.vars:
            return self
        new = Layout(names)
        pos = []
        for i, v in enumerate(self.vars):
            if v not in new.index:
                if any(e[i] for e in self.as_dict()):
                    raise ValueError(f"variable {v} in use, cannot drop it")
                pos.append(None)
            else:
                pos.append(new.index[v])
        t = {}
        for e, c in self.as_dict().items():
            ne = [0] * new.n
            for i, x in enumerate(e):
                if x:
                    ne[pos[i]] = x
            t[new.pack(ne)] = c
        return Polynomial._raw(self.ring, new, t)

    def _align(self, other):
        if isinstance(other, Polynomial):
            if other.base != self.base:
                raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            ring = self.ring
            from .truncated import TruncatedPolyRing
            if isinstance(other.ring, TruncatedPolyRing) and not isinstance(ring, TruncatedPolyRing):
                ring = other.ring
            elif isinstance(ring, TruncatedPolyRing) and isinstance(other.ring, TruncatedPolyRing) and ring != other.ring:
                raise RingError("different truncations")
            if other.vars == self.vars:
                a, b = self, other
            else:
                names = list(self.vars) + [v for v in other.vars if v not in self.layout.index]
                a, b = self.with_vars(names), other.with_vars(names)
            if ring is not self.ring:
                a = Polynomial._raw(ring, a.layout, a._t)
                b = Polynomial._raw(ring, b.layout, b._t)
            return a, b
        c = self.base.coerce(other)
        return self, Polynomial.constant(self.ring, self.vars, c)

    # -- arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        a, b = self._align(other)
        t = dict(a._t)
        if a._kind == "native":
            for m, c in b._t.items():
                s = t.get(m, 0) + c
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        else:
            R = a.base
            for m, c in b._t.items():
                s = R.add(t[m], c) if m in t else c
                if R.is_zero(s):
                    t.pop(m, None)
                else:
                    t[m] = s
        return Polynomial._raw(a.ring, a.layout, t)

    __radd__ = __add__

    def __neg__(self):
        R = self.base
        return Polynomial._raw(self.ring, self.layout, {m: R.neg(c) for m, c in self._t.items()})

    def __sub__(self, other):
        a, b = self._align(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        """Multiply by a ring element (not coerced: finite field codes stay codes)."""
        R = self.base
        if R.is_zero(c):
            return Polynomial._raw(self.ring, self.layout, {})
        t = {}
        for m, x in self._t.items():
            y = R.mul(x, c)
            if not R.is_zero(y):
                t[m] = y
        return Polynomial._raw(self.ring, self.layout, t)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(self.base.coerce(other))
        a, b = self._align(other)
        ta, tb = a._t, b._t
        if not ta or not tb:
            return Polynomial._raw(a.ring, a.layout, {})
        if len(ta) < len(tb):
            ta, tb = tb, ta
        if max(ta) >> a.layout.deg_shift or max(tb) >> a.layout.deg_shift:
            if (max(ta) >> a.layout.deg_shift) + (max(tb) >> a.layout.deg_shift) > MAX_DEGREE:
                raise OverflowError("product degree exceeds packing width")
        _charge(len(ta) * len(tb))
        res: dict = {}
        get = res.get
        kind = a._kind
        caps = a._caps
        if kind in ("native", "modp") and not caps:
            items_b = list(tb.items())
            for m1, c1 in ta.items():
                for m2, c2 in items_b:
                    m = m1 + m2
                    res[m] = get(m, 0) + c1 * c2
            if kind == "modp":
                p = a.base.p
                res = {m: c % p for m, c in res.items() if c % p}
            else:
                res = {m: c for m, c in res.items() if c}
        elif kind in ("native", "modp"):
            for m1, c1 in ta.items():
                for m2, c2 in tb.items():
                    m = m1 + m2
                    if a._capped(m):
                        continue
                    res[m] = get(m, 0) + c1 * c2
            if kind == "modp":
                p = a.base.p
                res = {m: c % p for m, c in res.items() if c % p}
            else:
                res = {m: c for m, c in res.items() if c}
        else:
            R = a.base
            add, mul, zero = R.add, R.mul, R.zero
            for m1, c1 in ta.items():
                for m2, c2 in tb.items():
                    m = m1 + m2
                    if caps and a._capped(m):
                        continue
                    res[m] = add(get(m, zero), mul(c1, c2))
            res = {m: c for m, c in res.items() if not R.is_zero(c)}
        return Polynomial._raw(a.ring, a.layout, res)

    def __rmul__(self, other):
        return self.scale(self.base.coerce(other))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.ring, self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if other.base != self.base:
                return False
            try:
                a, b = self._align(other)
            except (RingError, ValueError):
                return False
            return a._t == b._t
        try:
            c = self.base.coerce(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented
        if self.base.is_zero(c):
            return not self._t
        return self._t == {0: c}

    def __hash__(self):
        items = frozenset((self.layout.unpack(m), c) for m, c in self._t.items())
        return hash(items)

    # -- division ---------------------------------------------------------------
    def leading(self):
        m = max(self._t)
        return m, self._t[m]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises if ``other`` does not divide."""
        a, b = self._align(other)
        if not b._t:
            raise ZeroDivisionError("division by zero polynomial")
        R = a.base
        bm, bc = b.leading()
        layout = a.layout
        rem = a
        quot: dict = {}
        while rem._t:
            rm, rc = rem.leading()
            if any(x < y for x, y in zip(layout.unpack(rm), layout.unpack(bm))):
                raise RingError("polynomial division is not exact")
            dm = rm - bm
            if isinstance(R, IntegerRing):
                qc = R.exact_div(rc, bc)
            else:
                qc = R.div(rc, bc)
            quot[dm] = qc
            rem = rem - Polynomial._raw(a.ring, layout, {dm: qc}) * b
        return Polynomial._raw(a.ring, layout, quot)

    # -- evaluation ---------------------------------------------------------------
    def evaluate(self, values: Mapping, ring: Ring | None = None):
        """Evaluate at ``values`` (var -> element of ``ring``, taken as is; missing
        variables must not occur).  Coefficients go through the natural map into
        ``ring``, so integer and rational coefficients reduce modulo p."""
        target = ring if ring is not None else self.base
        cmap = coefficient_map(self.base, target)
        powers = []
        for i, v in enumerate(self.vars):
            if v in values:
                powers.append([target.one, values[v]])
            else:
                powers.append(None)
        acc = target.zero
        for e, c in self.as_dict().items():
            term = cmap(c)
            for i, x in enumerate(e):
                if not x:
                    continue
                pw = powers[i]
                if pw is None:
                    raise KeyError(f"no value for variable {self.vars[i]}")
                while len(pw) <= x:
                    pw.append(target.mul(pw[-1], pw[1]))
                term = target.mul(term, pw[x])
            acc = target.add(acc, term)
        return acc

    def substitute(self, mapping: Mapping, names: Sequence[str] | None = None) -> "Polynomial":
        """Replace variables by polynomials (or scalars); others are kept."""
        from .truncated import PolyRing
        keep = [v for v in self.vars if v not in mapping]
        extra = []
        for val in mapping.values():
            if isinstance(val, Polynomial):
                extra.extend(v for v in val.vars if v not in extra)
        if names is None:
            names = list(dict.fromkeys(keep + extra))
        R = PolyRing(self.ring, names)
        values = {v: R.coerce(mapping[v]) if v in mapping else R.gen(v) for v in self.vars}
        return self.evaluate(values, R)

    def map_coefficients(self, ring: Ring) -> "Polynomial":
        """Image under the natural coefficient map into ``ring`` (e.g. mod p)."""
        cmap = coefficient_map(self.base, _scalar_ring(ring))
        t = {}
        R = _scalar_ring(ring)
        for m, c in self._t.items():
            y = cmap(c)
            if not R.is_zero(y):
                t[m] = y
        out = Polynomial._raw(ring, self.layout, t)
        if out._caps:
            out._t = {m: c for m, c in t.items() if not out._capped(m)}
        return out

    def derivative(self, var: str) -> "Polynomial":
        i = self.layout.index[var]
        t = {}
        for e, c in self.as_dict().items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                c2 = self.base.mul(c, self.base.from_int(e[i]))
                if not self.base.is_zero(c2):
                    t[self.layout.pack(ne)] = c2
        return Polynomial._raw(self.ring, self.layout, t)

    # -- text ---------------------------------------------------------------------
    def __str__(self):
        if not self._t:
            return "0"
        R = self.base
        out = []
        for e, c in self.terms():
            mono = "*".join(v if x == 1 else f"{v}^{x}" for v, x in zip(self.vars, e) if x)
            cs = R.format(c)
            if not mono:
                out.append(cs)
            elif cs == "1":
                out.append(mono)
            elif cs == "-1":
                out.append("-" + mono)
            else:
                out.append(f"({cs})*{mono}" if any(ch in cs[1:] for ch in "+-/") else f"{cs}*{mono}")
        s = " + ".join(out)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self})"


def coefficient_map(src: Ring, dst: Ring):
    """Natural ring map between coefficient rings (ZZ -> anything, QQ -> fields
    where denominators are invertible, GF(p^a) -> GF(p^b) by embedding)."""
    from .truncated import TruncatedPolyRing, PolyRing
    if src == dst:
        return lambda c: c
    if isinstance(src, IntegerRing):
        return dst.from_int
    if isinstance(src, RationalField):
        return dst.coerce
    if isinstance(dst, (TruncatedPolyRing, PolyRing)):
        inner = coefficient_map(src, dst.base)
        return lambda c: dst.from_element(inner(c))
    if isinstance(src, FiniteField) and isinstance(dst, FiniteField):
        table = dst.embedding_from(src)
        return table.__getitem__
    raise RingError(f"no coefficient map from {src!r} to {dst!r}")
