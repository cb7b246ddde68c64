"""
Subcommand to run the convergence study of the manufactured solution.
"""

from typing import ClassVar, final

from ..config import Mode
from .base import Base, SubparserArguments, SubparserKeywords
from .run import RunCommand


@final
@Base.register("mms-convergence")
class MMSConvergence(RunCommand):
    """
    Measure errors and convergence rates against the manufactured solution.
    """

    mode: ClassVar[Mode] = "mms-convergence"
    subparser_keywords: ClassVar[SubparserKeywords] = {
        "help": "Run the manufactured solution convergence study",
        "description": "Solve the manufactured case on refined meshes and "
        + "check the observed convergence rates.",
    }
    subparser_arguments: ClassVar[SubparserArguments] = [
        *RunCommand.common_arguments,
        (
            ("-l", "--levels"),
            {
                "type": int,
                "metavar": "K",
                "help": "Number of refinement levels instead of the setting",
            },
        ),
    ]
