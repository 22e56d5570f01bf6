"""Exact arithmetic for Fuchsian differential operators with three singular
points: construction, transforms, shift operators, S-values and
factorizations."""

from .arith import Q, RatFunc, UniPoly
from .catalog import (
    build_E2,
    build_E6,
    build_G6,
    build_H3,
    build_H4,
    build_H5,
    build_H6,
    build_self_adjoint,
)
from .weyl import DiffOp, parse_op

__version__ = "0.1.0"

__all__ = [
    "Q", "RatFunc", "UniPoly", "DiffOp", "parse_op",
    "build_E2", "build_H3", "build_H4", "build_H5", "build_H6", "build_G6", "build_E6",
    "build_self_adjoint",
]
