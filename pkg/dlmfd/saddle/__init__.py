"""
Saddle point system, direct solves and inf-sup estimates.
"""

from .blocks import Spaces, assemble_blocks, build_spaces
from .infsup import (
    EigenFailure,
    InfSupOperands,
    estimate_infsup,
    infsup_operands,
    multiplier_norm,
)
from .system import (
    BlockOperator,
    BlockShapeError,
    ResidualReport,
    SaddleRHS,
    SaddleSolution,
    SingularSystem,
    SystemBlocks,
    build_system,
    residuals,
    solve,
)

__all__ = [
    "Spaces",
    "assemble_blocks",
    "build_spaces",
    "EigenFailure",
    "InfSupOperands",
    "estimate_infsup",
    "infsup_operands",
    "multiplier_norm",
    "BlockOperator",
    "BlockShapeError",
    "ResidualReport",
    "SaddleRHS",
    "SaddleSolution",
    "SingularSystem",
    "SystemBlocks",
    "build_system",
    "residuals",
    "solve",
]
