"""
Manufactured solutions, error norms and refinement studies.
"""

from .base import (
    EnergyViolation,
    InfSupFailure,
    MMSInconsistent,
    SlopeFailure,
    VerificationFailure,
)
from .mms import MMSCase, check_case, mms_case, weak_residual
from .norms import ErrorNorms, error_norms
from .study import (
    ConvergenceReport,
    InfSupReport,
    StudyLevelError,
    convergence_study,
    infsup_study,
    solve_case,
    study_levels,
)

__all__ = [
    "EnergyViolation",
    "InfSupFailure",
    "MMSInconsistent",
    "SlopeFailure",
    "VerificationFailure",
    "MMSCase",
    "check_case",
    "mms_case",
    "weak_residual",
    "ErrorNorms",
    "error_norms",
    "ConvergenceReport",
    "InfSupReport",
    "StudyLevelError",
    "convergence_study",
    "infsup_study",
    "solve_case",
    "study_levels",
]
