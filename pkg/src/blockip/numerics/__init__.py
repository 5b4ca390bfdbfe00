"""Arithmetic substrate: named vectors/matrices and exact integer lattice algebra."""

from blockip.numerics.vectors import (
    IntMat,
    IntVec,
    RatVec,
    conformal_leq,
    dot,
    mat_apply,
    norms,
    primitive,
)

__all__ = [
    "IntMat",
    "IntVec",
    "RatVec",
    "conformal_leq",
    "dot",
    "mat_apply",
    "norms",
    "primitive",
]
