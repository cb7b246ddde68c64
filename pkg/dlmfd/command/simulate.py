"""
Subcommand to simulate the coupled problem over time.
"""

from typing import ClassVar, final

from ..config import Mode
from .base import Base, SubparserKeywords
from .run import RunCommand


@final
@Base.register("simulate")
class Simulate(RunCommand):
    """
    Run the time stepping scheme with snapshots and the energy audit.
    """

    mode: ClassVar[Mode] = "simulate"
    subparser_keywords: ClassVar[SubparserKeywords] = {
        "help": "Simulate the coupled problem",
        "description": "Run the semi-implicit time stepping scheme, writing "
        + "VTK snapshots and the energy log.",
    }
    subparser_arguments = RunCommand.common_arguments
