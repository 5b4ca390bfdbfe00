"""Exact LP/MIP back end: program container, simplex, branch-and-bound, TU rounding."""

from blockip.mip.branch_bound import mip_solve
from blockip.mip.model import Constraint, MixedProgram, Sense, SolveOutcome, Status, Variable
from blockip.mip.rounding import tu_round
from blockip.mip.simplex import lp_solve

__all__ = [
    "Constraint",
    "MixedProgram",
    "Sense",
    "SolveOutcome",
    "Status",
    "Variable",
    "lp_solve",
    "mip_solve",
    "tu_round",
]
