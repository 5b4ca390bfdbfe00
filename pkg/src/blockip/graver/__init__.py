"""Graver bases and the solution sets derived from them."""

from blockip.graver.engine import (
    GraverBasis,
    GraverDecomposition,
    base_norm_bound,
    base_solutions,
    graver_basis,
    graver_decompose,
    graver_norm_bound,
    minimal_solutions,
    nonnegative_graver,
)

__all__ = [
    "GraverBasis",
    "GraverDecomposition",
    "base_norm_bound",
    "base_solutions",
    "graver_basis",
    "graver_decompose",
    "graver_norm_bound",
    "minimal_solutions",
    "nonnegative_graver",
]
