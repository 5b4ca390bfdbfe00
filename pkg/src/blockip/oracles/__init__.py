"""Brute-force oracles over explicit search boxes."""

from blockip.oracles.brute_force import (
    BruteForceResult,
    SearchBox,
    circuit_box,
    graver_bf,
    intcone_member_bf,
    sat_bf,
    solve_bf,
    steinitz_box,
    subset_sum_dp,
)

__all__ = [
    "BruteForceResult",
    "SearchBox",
    "circuit_box",
    "graver_bf",
    "intcone_member_bf",
    "sat_bf",
    "solve_bf",
    "steinitz_box",
    "subset_sum_dp",
]
