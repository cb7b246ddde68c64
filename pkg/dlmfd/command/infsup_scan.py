"""
Subcommand to scan inf-sup estimates over mesh size ratios.
"""

from typing import ClassVar, final

from ..config import Mode
from .base import Base, SubparserArguments, SubparserKeywords
from .run import RunCommand


def parse_ratios(text: str) -> list[float]:
    """
    Parse a comma-separated list of fluid to solid mesh size ratios.
    """

    ratios = [float(part) for part in text.split(",") if part.strip()]
    if not ratios:
        raise ValueError("Expected at least one ratio")
    return ratios


@final
@Base.register("infsup-scan")
class InfSupScan(RunCommand):
    """
    Estimate discrete inf-sup constants over levels and mesh size ratios.
    """

    mode: ClassVar[Mode] = "infsup-scan"
    subparser_keywords: ClassVar[SubparserKeywords] = {
        "help": "Scan inf-sup estimates",
        "description": "Estimate the inf-sup constant of the coupling for "
        + "refined meshes and fluid to solid mesh size ratios.",
    }
    subparser_arguments: ClassVar[SubparserArguments] = [
        *RunCommand.common_arguments,
        (
            ("-r", "--ratios"),
            {
                "type": parse_ratios,
                "metavar": "LIST",
                "help": "Comma-separated ratios instead of the setting",
            },
        ),
    ]
