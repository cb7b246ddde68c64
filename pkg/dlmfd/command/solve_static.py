"""
Subcommand to solve the stationary problem of one time step.
"""

from typing import ClassVar, final

from ..config import Mode
from .base import Base, SubparserKeywords
from .run import RunCommand


@final
@Base.register("solve-static")
class SolveStatic(RunCommand):
    """
    Solve the stationary saddle point problem of a configuration.
    """

    mode: ClassVar[Mode] = "solve-static"
    subparser_keywords: ClassVar[SubparserKeywords] = {
        "help": "Solve the stationary problem",
        "description": "Solve the saddle point problem of the first time "
        + "step and write the solution and a residual report.",
    }
    subparser_arguments = RunCommand.common_arguments
