"""Polynomial rings and truncated polynomial rings as ring objects."""
from __future__ import annotations

import random
from typing import Mapping, Sequence

from .polynomial import Polynomial
from .rings import FiniteField, Ring, RingError


class PolyRing(Ring):
    """Polynomials in ``names`` over ``coeffs`` (which may itself be truncated,
    in which case the truncated variables are prepended)."""

    def __init__(self, coeffs: Ring, names: Sequence[str]):
        if isinstance(coeffs, PolyRing):
            names = list(coeffs.names) + [v for v in names if v not in coeffs.names]
            coeffs = coeffs.coeffs
        self.coeffs = coeffs
        if isinstance(coeffs, TruncatedPolyRing):
            names = list(coeffs.names) + [v for v in names if v not in coeffs.caps]
            self.base = coeffs.base
        else:
            self.base = coeffs
        self.names = tuple(dict.fromkeys(names))
        self.characteristic = self.base.characteristic
        self.is_domain = self.base.is_domain and not isinstance(coeffs, TruncatedPolyRing)
        self.zero = Polynomial.constant(self.coeffs, self.names, 0)
        self.one = Polynomial.constant(self.coeffs, self.names, 1)

    def __repr__(self):
        return f"{self.coeffs!r}[{','.join(self.names)}]"

    def spec(self):
        return {"kind": "PolynomialRing", "base": self.coeffs.spec(), "vars": list(self.names)}

    def gen(self, name):
        return Polynomial.variable(self.coeffs, self.names, name)

    def gens(self):
        return [self.gen(v) for v in self.names]

    def from_int(self, n):
        return Polynomial.constant(self.coeffs, self.names, n)

    def from_element(self, c):
        """Constant polynomial from an element of the scalar ring (no coercion).
        Elements of a truncated scalar ring are already polynomials."""
        if isinstance(c, Polynomial):
            return c.with_vars(self.names)
        return Polynomial.constant(self.coeffs, self.names, c, coerce=False)

    def coerce(self, x):
        if isinstance(x, Polynomial):
            return x.with_vars(self.names) if set(x.vars) <= set(self.names) else x
        return Polynomial.constant(self.coeffs, self.names, x)

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def is_unit(self, a):
        if isinstance(self.coeffs, TruncatedPolyRing):
            return self.coeffs.is_unit(a)
        return a.is_constant() and self.base.is_unit(a.constant_term())

    def inv(self, a):
        if isinstance(self.coeffs, TruncatedPolyRing):
            return self.coeffs.inv(a)
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit")
        return self.from_element(self.base.inv(a.constant_term()))

    def exact_div(self, a, b):
        return a.exact_div(b)

    def encode(self, a):
        raise RingError("encode polynomials with the JSON codec")

    def random_element(self, rng: random.Random, degree=2, density=0.5):
        from itertools import product
        terms = {}
        n = len(self.names)
        for e in product(range(degree + 1), repeat=n):
            if sum(e) <= degree and rng.random() < density:
                terms[e] = self.base.random_element(rng)
        return Polynomial(self.coeffs, self.names, terms, coerce=False)


class TruncatedPolyRing(Ring):
    """``base[x_1..x_k] / (x_i^{e_i})``.  Elements are Polynomials in the
    truncated variables; every element with zero constant term is nilpotent."""

    is_domain = False

    def __init__(self, base: Ring, caps: Mapping[str, int]):
        if isinstance(base, TruncatedPolyRing):
            raise RingError("nested truncation is not supported")
        if not caps or any(c < 1 for c in caps.values()):
            raise RingError("caps must be positive")
        self.base = base
        self.caps = dict(caps)
        self.names = tuple(self.caps)
        self.characteristic = base.characteristic
        self.zero = Polynomial.constant(self, self.names, 0)
        self.one = Polynomial.constant(self, self.names, 1)

    def __repr__(self):
        rel = ",".join(f"{v}^{c}" for v, c in self.caps.items())
        return f"{self.base!r}[{','.join(self.names)}]/({rel})"

    def spec(self):
        return {"kind": "TruncatedPolyRing", "base": self.base.spec(), "caps": dict(self.caps)}

    def gen(self, name):
        return Polynomial.variable(self, self.names, name)

    def gens(self):
        return [self.gen(v) for v in self.names]

    def from_int(self, n):
        return Polynomial.constant(self, self.names, n)

    def from_element(self, c):
        return Polynomial.constant(self, self.names, c, coerce=False)

    def coerce(self, x):
        if isinstance(x, Polynomial):
            return x
        return Polynomial.constant(self, self.names, x)

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def is_unit(self, a):
        return self.base.is_unit(a.constant_term())

    def inv(self, a):
        c0 = a.constant_term()
        if not self.base.is_unit(c0):
            raise ZeroDivisionError(f"{a} is not a unit")
        c0inv = self.from_element(self.base.inv(c0))
        nil = a * c0inv - self.one        # a = c0 (1 + nil)
        # (1 + nil)^-1 = sum (-nil)^k, finite because nil is nilpotent
        acc, term = self.one, self.one
        while True:
            term = term * (-nil)
            if term.is_zero():
                break
            acc = acc + term
        return acc * c0inv

    def exact_div(self, a, b):
        return a * self.inv(b)

    def random_element(self, rng: random.Random, density=0.5):
        from itertools import product
        terms = {}
        for e in product(*(range(c) for c in self.caps.values())):
            if rng.random() < density:
                terms[e] = self.base.random_element(rng)
        return Polynomial(self, self.names, terms, coerce=False)

    def elements(self):
        """All elements (finite base only)."""
        from itertools import product
        if not isinstance(self.base, FiniteField):
            raise RingError("infinite ring")
        monos = list(product(*(range(c) for c in self.caps.values())))
        for coeffs in product(range(self.base.q), repeat=len(monos)):
            yield Polynomial(self, self.names, dict(zip(monos, coeffs)), coerce=False)
