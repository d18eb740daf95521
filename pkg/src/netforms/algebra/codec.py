"""JSON encoding of rings, polynomials and matrices.

Coefficients are strings: decimal integers, ``num/den`` for rationals, and the
integer element code for extension fields.  Terms are listed in descending
graded-lex order so that encoding is canonical and round trips are exact.
"""
from __future__ import annotations

import json

from .matrix import Matrix
from .polynomial import Polynomial
from .rings import GF, QQ, ZZ, Ring, RingError
from .truncated import PolyRing, TruncatedPolyRing


def ring_to_json(ring: Ring) -> dict:
    return ring.spec()


def ring_from_json(d: dict) -> Ring:
    kind = d.get("kind")
    if kind == "IntegerRing":
        return ZZ
    if kind == "RationalField":
        return QQ
    if kind == "PrimeField":
        return GF(int(d["p"]), 1)
    if kind == "ExtensionField":
        return GF(int(d["p"]), int(d["degree"]))
    if kind == "TruncatedPolyRing":
        return TruncatedPolyRing(ring_from_json(d["base"]), {k: int(v) for k, v in d["caps"].items()})
    if kind == "PolynomialRing":
        return PolyRing(ring_from_json(d["base"]), d["vars"])
    raise RingError(f"unknown ring kind {kind!r}")


def poly_to_json(p: Polynomial) -> dict:
    return {
        "ring": p.ring.spec(),
        "vars": list(p.vars),
        "terms": [[list(e), p.base.encode(c)] for e, c in p.terms()],
    }


def poly_from_json(d: dict, ring: Ring | None = None) -> Polynomial:
    ring = ring or ring_from_json(d["ring"])
    base = ring.base if isinstance(ring, TruncatedPolyRing) else ring
    names = d["vars"]
    terms = {}
    for e, c in d["terms"]:
        if len(e) != len(names):
            raise ValueError(f"exponent vector {e} does not match {len(names)} variables")
        key = tuple(int(x) for x in e)
        if key in terms:
            raise ValueError(f"repeated monomial {key}")
        terms[key] = base.decode(str(c))
    return Polynomial(ring, names, terms, coerce=False)


def _entry_to_json(ring, x):
    if isinstance(x, Polynomial):
        return poly_to_json(x)
    return ring.encode(x)


def _entry_from_json(ring, x):
    if isinstance(x, dict):
        coeffs = ring.coeffs if isinstance(ring, PolyRing) else ring
        return poly_from_json(x, coeffs)
    return ring.decode(str(x))


def matrix_to_json(m: Matrix) -> dict:
    return {
        "ring": m.ring.spec(),
        "rows": m.nrows,
        "cols": m.ncols,
        "entries": [[_entry_to_json(m.ring, x) for x in r] for r in m.rows],
    }


def matrix_from_json(d: dict, ring: Ring | None = None) -> Matrix:
    ring = ring or ring_from_json(d["ring"])
    entries = d["entries"]
    if len(entries) != d["rows"] or any(len(r) != d["cols"] for r in entries):
        raise ValueError("matrix dimensions do not match entries")
    return Matrix(ring, [[_entry_from_json(ring, x) for x in r] for r in entries])


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
