"""Exact computations with nets of alternating forms, ternary quadratic forms
and the quintic del Pezzo threefold they define."""

__version__ = "0.1.0"
