"""Block-structured program data classes."""

from blockip.programs.models import (
    CnfFormula,
    FourBlockBrick,
    FourBlockProgram,
    NFoldBrick,
    NFoldProgram,
    NFoldResult,
    TwoStageBrick,
    TwoStageProgram,
    TwoStageVerdict,
)

__all__ = [
    "CnfFormula",
    "FourBlockBrick",
    "FourBlockProgram",
    "NFoldBrick",
    "NFoldProgram",
    "NFoldResult",
    "TwoStageBrick",
    "TwoStageProgram",
    "TwoStageVerdict",
]
