"""Block-structured solvers: two-stage feasibility and uniform n-fold optimisation."""

from blockip.solvers.faithful import (
    FaithfulDecomposition,
    faithful_check,
    faithful_decompose,
    faithful_step,
)
from blockip.solvers.nfold import (
    ModelM,
    build_model,
    expand_program,
    solve_nfold,
    solve_nfold_direct,
)
from blockip.solvers.twostage import (
    normalize_twostage,
    solve_twostage_direct,
    solve_twostage_residue,
)

__all__ = [
    "FaithfulDecomposition",
    "ModelM",
    "build_model",
    "expand_program",
    "faithful_check",
    "faithful_decompose",
    "faithful_step",
    "normalize_twostage",
    "solve_nfold",
    "solve_nfold_direct",
    "solve_twostage_direct",
    "solve_twostage_residue",
]
