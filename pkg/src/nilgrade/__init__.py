"""Exact-arithmetic classification of naturally graded nilpotent associative
algebras with a long one-generated part and a two-step tail."""
from __future__ import annotations

from .errors import NilgradeError
from .scalar import FieldDescriptor, Fp, Qi, Quad, parse_scalar, sqrt_adjoin

__version__ = "0.1.0"

__all__ = [
    "FieldDescriptor",
    "Fp",
    "NilgradeError",
    "Qi",
    "Quad",
    "__version__",
    "parse_scalar",
    "sqrt_adjoin",
]
