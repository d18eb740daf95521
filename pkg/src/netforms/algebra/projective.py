"""Projective points: normalization and enumeration over finite fields."""
from __future__ import annotations

from itertools import product

import numpy as np

from .rings import FiniteField, Ring


def normalize(vec, ring: Ring) -> tuple:
    """Scale so that the first nonzero coordinate is 1."""
    for x in vec:
        if not ring.is_zero(x):
            inv = ring.inv(x)
            return tuple(ring.mul(inv, y) for y in vec)
    raise ValueError("the zero vector is not a projective point")


def projectively_equal(u, v, ring: Ring) -> bool:
    return normalize(u, ring) == normalize(v, ring)


def projective_points(field: FiniteField, n: int):
    """Normalized points of P^n(F_q) in ascending lexicographic order of codes,
    so (0,...,0,1) comes first."""
    q = field.q
    for lead in range(n, -1, -1):
        for tail in product(range(q), repeat=n - lead):
            yield (0,) * lead + (1,) + tail


def count_projective(q: int, n: int) -> int:
    return sum(q ** k for k in range(n + 1))


def projective_array(field: FiniteField, n: int) -> np.ndarray:
    """All normalized points of P^n(F_q) as an (N, n+1) array, same order as
    :func:`projective_points`."""
    q = field.q
    blocks = []
    for lead in range(n, -1, -1):
        k = n - lead
        if k:
            grid = np.indices((q,) * k).reshape(k, -1).T
        else:
            grid = np.zeros((1, 0), dtype=np.int64)
        block = np.zeros((grid.shape[0], n + 1), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = grid
        blocks.append(block)
    return np.concatenate(blocks)


class VectorField:
    """Elementwise arithmetic on arrays of element codes of a finite field."""

    def __init__(self, field: FiniteField):
        self.field = field
        self.p = field.p
        if field.degree > 1:
            self._add = field.np_add
            self._mul = field.np_mul
            self._neg = field.np_neg

    def add(self, a, b):
        if self.field.degree == 1:
            return (a + b) % self.p
        return self._add[a, b]

    def mul(self, a, b):
        if self.field.degree == 1:
            return (a * b) % self.p
        return self._mul[a, b]

    def neg(self, a):
        if self.field.degree == 1:
            return (-a) % self.p
        return self._neg[a]

    def const(self, c, like):
        return np.full(like.shape, c, dtype=np.int64)

    def eval_poly(self, poly, columns):
        """Evaluate a polynomial (coefficients in this field) on arrays of codes,
        one array per variable of ``poly``."""
        shape = columns[0].shape
        acc = np.zeros(shape, dtype=np.int64)
        cache = {}
        for e, c in poly.as_dict().items():
            term = np.full(shape, c, dtype=np.int64)
            for i, k in enumerate(e):
                if not k:
                    continue
                key = (i, k)
                if key not in cache:
                    v = columns[i]
                    pw = v
                    for _ in range(k - 1):
                        pw = self.mul(pw, v)
                    cache[key] = pw
                term = self.mul(term, cache[key])
            acc = self.add(acc, term)
        return acc
