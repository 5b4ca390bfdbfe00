"""Vertex rounding for totally unimodular residual programs."""

from __future__ import annotations

import logging
from typing import Mapping

from blockip.errors import InternalInconsistency
from blockip.mip.model import MixedProgram, Status
from blockip.mip.simplex import lp_solve

logger = logging.getLogger(__name__)


def tu_round(program: MixedProgram, fixed: Mapping[str, int]) -> dict[str, int]:
    """Fix the given variables and return an integral vertex of the remaining LP.

    The caller guarantees that the residual constraint matrix is totally unimodular with
    integral right-hand side, so the simplex vertex is integral; anything else is a bug.
    """
    bounds = {name: (value, value) for name, value in fixed.items()}
    residual = program.with_bounds(bounds).relaxed()
    outcome = lp_solve(residual)
    if outcome.status is not Status.OPTIMAL:
        raise InternalInconsistency(f"{program.name}: residual LP ended {outcome.status.value}")
    fractional = [n for n, v in outcome.assignment.items() if v.denominator != 1]
    if fractional:
        raise InternalInconsistency(
            f"{program.name}: residual vertex is fractional in {fractional[:5]}"
        )
    logger.debug(f"{program.name}: rounded {len(outcome.assignment) - len(fixed)} variables")
    return {name: int(value) for name, value in outcome.assignment.items()}
