"""
Subcommand collection package.
"""

from .base import Base
from .config import Config
from .infsup_scan import InfSupScan
from .mms_convergence import MMSConvergence
from .simulate import Simulate
from .solve_static import SolveStatic

__all__ = [
    "Base",
    "Config",
    "InfSupScan",
    "MMSConvergence",
    "Simulate",
    "SolveStatic",
]
