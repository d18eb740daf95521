from .rings import (GF, QQ, ZZ, ExtensionField, FiniteField, IntegerRing, PrimeField,
                    RationalField, Ring, RingError, field_extension)
from .polynomial import BudgetExceeded, Polynomial, TermBudget, coefficient_map
from .truncated import PolyRing, TruncatedPolyRing
from .matrix import (Matrix, adjugate, determinant, inverse, nullspace, pfaffian, rank,
                     rref, solve, span_coordinates, trace)
from .codec import (matrix_from_json, matrix_to_json, poly_from_json, poly_to_json,
                    ring_from_json, ring_to_json)


def poly_arith(op: str, p: Polynomial, q: Polynomial | None = None, n: int | None = None) -> Polynomial:
    """Named entry point for +, -, *, neg and ^."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "neg":
        return -p
    if op == "pow":
        return p ** n
    raise ValueError(f"unknown operation {op!r}")


def evaluate(p: Polynomial, point: dict, ring: Ring | None = None):
    return p.evaluate(point, ring)
