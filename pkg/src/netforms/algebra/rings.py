"""Scalar rings used throughout the package.

Rings are context objects: elements are plain Python values (``int``,
``Fraction``, integer codes for finite fields, ``Polynomial`` for the
truncated rings) and the ring carries the arithmetic.  This keeps hot
loops free of wrapper objects.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import cached_property

import numpy as np


class RingError(ValueError):
    pass


class Ring:
    is_field = False
    is_domain = True
    characteristic = 0
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return a == 0

    def eq(self, a, b) -> bool:
        return a == b

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def from_int(self, n: int):
        raise NotImplementedError

    def from_fraction(self, x: Fraction):
        x = Fraction(x)
        return self.mul(self.from_int(x.numerator), self.inv(self.from_int(x.denominator)))

    def coerce(self, x):
        """Map an int, a Fraction or an element of a sub-ring into this ring."""
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return self.from_int(x.numerator)
            return self.from_fraction(x)
        return x

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def exact_div(self, a, b):
        return self.div(a, b)

    def sum(self, items):
        acc = self.zero
        for x in items:
            acc = self.add(acc, x)
        return acc

    def encode(self, a) -> str:
        return str(a)

    def decode(self, s: str):
        return self.from_int(int(s))

    def spec(self) -> dict:
        raise NotImplementedError

    def random_element(self, rng: random.Random):
        raise NotImplementedError

    def format(self, a) -> str:
        return self.encode(a)

    def __eq__(self, other):
        return type(self) is type(other) and self.spec() == other.spec()

    def __hash__(self):
        return hash(repr(self.spec()))


class IntegerRing(Ring):
    def __repr__(self):
        return "ZZ"

    def from_int(self, n):
        return int(n)

    def from_fraction(self, x):
        x = Fraction(x)
        if x.denominator != 1:
            raise RingError(f"{x} is not an integer")
        return x.numerator

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a not in (1, -1):
            raise ZeroDivisionError(f"{a} is not a unit in ZZ")
        return a

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise RingError(f"{b} does not divide {a}")
        return q

    def spec(self):
        return {"kind": "IntegerRing"}

    def random_element(self, rng, bound=10):
        return rng.randint(-bound, bound)


class RationalField(Ring):
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, x):
        return Fraction(x)

    def coerce(self, x):
        return Fraction(x)

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def encode(self, a):
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def decode(self, s):
        return Fraction(s)

    def spec(self):
        return {"kind": "RationalField"}

    def random_element(self, rng, bound=10):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


ZZ = IntegerRing()
QQ = RationalField()


# Fixed moduli for the small extension fields used in the text, low degree
# coefficient first.  Other extensions use the least irreducible polynomial.
FIXED_MODULI = {
    (2, 2): (1, 1, 1),        # w^2 + w + 1
    (2, 3): (1, 1, 0, 1),     # u^3 + u + 1
    (3, 2): (1, 0, 1),        # i^2 + 1
    (2, 4): (1, 1, 0, 0, 1),  # v^4 + v + 1
}
GENERATOR_NAMES = {(2, 2): "w", (2, 3): "u", (3, 2): "i", (2, 4): "v"}

TABLE_LIMIT = 4096


def _poly_mulmod(a, b, modulus, p):
    d = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for j in range(d + 1):
                prod[k - d + j] = (prod[k - d + j] - c * modulus[j]) % p
    prod = prod[:d] + [0] * max(0, d - len(prod))
    return prod


def _is_irreducible(poly, p):
    """Rabin-style check by trial: no root-free factorization search needed for
    the small degrees used here; we test for factors of every degree <= d/2."""
    d = len(poly) - 1
    for k in range(1, d // 2 + 1):
        for code in range(p ** k):
            cand = [(code // p ** i) % p for i in range(k)] + [1]
            if _poly_divides(cand, poly, p):
                return False
    return True


def _poly_divides(f, g, p):
    g = list(g)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    for k in range(len(g) - 1, df - 1, -1):
        c = g[k] * inv_lead % p
        if c:
            for j in range(df + 1):
                g[k - df + j] = (g[k - df + j] - c * f[j]) % p
    return not any(g[:df])


def least_irreducible(p: int, degree: int):
    for code in range(p ** degree):
        cand = tuple((code // p ** i) % p for i in range(degree)) + (1,)
        if cand[0] and _is_irreducible(cand, p):
            return cand
    raise RingError("no irreducible polynomial found")


class FiniteField(Ring):
    """GF(p^d) with elements encoded as integers 0..q-1 (base-p digits of the
    polynomial representative, lowest degree first)."""

    is_field = True

    def __init__(self, p: int, degree: int = 1, modulus=None):
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise RingError(f"{p} is not prime")
        if degree < 1:
            raise RingError("degree must be positive")
        self.p = p
        self.degree = degree
        self.q = p ** degree
        self.characteristic = p
        if degree == 1:
            self.modulus = (0, 1)
        elif modulus is not None:
            self.modulus = tuple(modulus)
        else:
            self.modulus = FIXED_MODULI.get((p, degree)) or least_irreducible(p, degree)
        if degree > 1 and self.q > TABLE_LIMIT:
            raise RingError(f"extension fields are limited to {TABLE_LIMIT} elements")
        self.gen_name = GENERATOR_NAMES.get((p, degree), "g")

    def __repr__(self):
        return f"GF({self.q})"

    def spec(self):
        if self.degree == 1:
            return {"kind": "PrimeField", "p": self.p}
        return {"kind": "ExtensionField", "p": self.p, "degree": self.degree}

    # -- tables -------------------------------------------------------------
    def _digits(self, x):
        return [(x // self.p ** i) % self.p for i in range(self.degree)]

    def _undigits(self, ds):
        return sum(c * self.p ** i for i, c in enumerate(ds))

    @cached_property
    def _log_exp(self):
        q, p = self.q, self.p
        for g in range(2, q) if q > 2 else [1]:
            exp = [1]
            x = 1
            gd = self._digits(g)
            for _ in range(q - 2):
                x = self._undigits(_poly_mulmod(self._digits(x), gd, self.modulus, p))
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                log = [0] * q
                for k, v in enumerate(exp):
                    log[v] = k
                return log, exp + exp
        raise RingError("no primitive element")

    @cached_property
    def add_table(self):
        q = self.q
        if self.degree == 1:
            return [[(a + b) % q for b in range(q)] for a in range(q)]
        if self.p == 2:
            return [[a ^ b for b in range(q)] for a in range(q)]
        digits = [self._digits(a) for a in range(q)]
        return [[self._undigits([(x + y) % self.p for x, y in zip(digits[a], digits[b])])
                 for b in range(q)] for a in range(q)]

    @cached_property
    def np_add(self):
        return np.array(self.add_table, dtype=np.int64)

    @cached_property
    def np_mul(self):
        q = self.q
        log, exp = self._log_exp
        t = np.zeros((q, q), dtype=np.int64)
        lg = np.array(log, dtype=np.int64)
        ex = np.array(exp, dtype=np.int64)
        idx = lg[1:, None] + lg[None, 1:]
        t[1:, 1:] = ex[idx]
        return t

    @cached_property
    def neg_table(self):
        return [self._undigits([(-c) % self.p for c in self._digits(a)]) for a in range(self.q)]

    @cached_property
    def np_neg(self):
        return np.array(self.neg_table, dtype=np.int64)

    @cached_property
    def inv_table(self):
        log, exp = self._log_exp
        return [0] + [exp[(self.q - 1 - log[a]) % (self.q - 1)] for a in range(1, self.q)]

    # -- scalar arithmetic ----------------------------------------------------
    def add(self, a, b):
        if self.degree == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.degree == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.neg_table[a]

    def mul(self, a, b):
        if self.degree == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        log, exp = self._log_exp
        return exp[log[a] + log[b]]

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of 0")
        if self.degree == 1:
            return pow(a, self.p - 2, self.p)
        return self.inv_table[a]

    def is_unit(self, a):
        return a != 0

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return int(n) % self.p

    def from_fraction(self, x):
        x = Fraction(x)
        den = x.denominator % self.p
        if not den:
            raise ZeroDivisionError(f"{x} has no image in {self!r}")
        return self.mul(x.numerator % self.p, self.inv(den))

    def frobenius(self, a):
        return self.pow(a, self.p)

    def elements(self):
        return range(self.q)

    def random_element(self, rng):
        return rng.randrange(self.q)

    @property
    def generator(self):
        """Class of the polynomial variable (the w, u, i, v of the fixed moduli)."""
        if self.degree == 1:
            raise RingError("prime fields have no adjoined generator")
        return self.p

    def format(self, a):
        if self.degree == 1:
            return str(a)
        parts = []
        for k, c in reversed(list(enumerate(self._digits(a)))):
            if not c:
                continue
            mono = "" if k == 0 else (self.gen_name if k == 1 else f"{self.gen_name}^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return "+".join(parts) or "0"

    def parse(self, s: str):
        """Parse an integer or a polynomial in the generator such as ``w+1``."""
        s = s.replace(" ", "")
        if not s:
            raise RingError("empty element")
        try:
            return self.from_int(int(s))
        except ValueError:
            pass
        if self.degree == 1:
            raise RingError(f"cannot parse {s!r} in {self!r}")
        acc = 0
        s = s.replace("-", "+-")
        for tok in filter(None, s.split("+")):
            sign = 1
            if tok.startswith("-"):
                sign, tok = -1, tok[1:]
            coeff, _, mono = tok.rpartition("*") if "*" in tok else ("", "", tok)
            if mono.startswith(self.gen_name):
                k = int(mono.split("^")[1]) if "^" in mono else 1
                c = int(coeff) if coeff else 1
            else:
                k, c = 0, int(mono)
            acc = self.add(acc, self.mul(self.from_int(sign * c), self.pow(self.generator, k)))
        return acc

    def decode(self, s):
        n = int(s)
        if not 0 <= n < self.q:
            raise RingError(f"{n} is not an element code of {self!r}")
        return n

    def encode(self, a):
        return str(int(a))

    def sqrt(self, a):
        """Some square root of ``a`` or None."""
        for x in range(self.q):
            if self.mul(x, x) == a:
                return x
        return None

    def embedding_from(self, sub: "FiniteField"):
        """Element-code map sending ``sub`` into this field (a ring map)."""
        if sub.p != self.p or self.degree % sub.degree:
            raise RingError(f"{sub!r} does not embed in {self!r}")
        if sub.degree == 1:
            return list(range(self.p))
        # find a root of sub's modulus; least code wins for determinism
        for r in range(self.q):
            acc, pw = 0, 1
            for c in sub.modulus:
                acc = self.add(acc, self.mul(self.from_int(c), pw))
                pw = self.mul(pw, r)
            if acc == 0:
                break
        else:
            raise RingError("no root of the sub-field modulus")
        table = []
        for a in range(sub.q):
            acc, pw = 0, 1
            for c in sub._digits(a):
                acc = self.add(acc, self.mul(self.from_int(c), pw))
                pw = self.mul(pw, r)
            table.append(acc)
        return table


def PrimeField(p: int) -> FiniteField:
    return FiniteField(p, 1)


def ExtensionField(p: int, degree: int) -> FiniteField:
    return FiniteField(p, degree)


_FIELD_CACHE: dict = {}


def GF(q: int, degree: int | None = None) -> FiniteField:
    """GF(q) for a prime power q, or GF(p, d)."""
    if degree is not None:
        key = (q, degree)
    else:
        for p in range(2, q + 1):
            if q % p == 0:
                break
        d, r = 0, q
        while r % p == 0:
            r //= p
            d += 1
        if r != 1:
            raise RingError(f"{q} is not a prime power")
        key = (p, d)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(*key)
    return _FIELD_CACHE[key]


def field_extension(base: FiniteField, k: int):
    """Return (GF(q^k), embedding code table of base)."""
    big = GF(base.p, base.degree * k)
    return big, big.embedding_from(base)
