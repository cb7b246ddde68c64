"""
CSV tables of energies, convergence errors and inf-sup estimates.
"""

import csv
from collections.abc import Sequence
from typing import NamedTuple, TextIO

from typing_extensions import override

from .base import Writer

Cell = str | int | float | bool


class Table(NamedTuple):
    """
    Header row and data rows of a CSV table.
    """

    header: tuple[str, ...]
    rows: Sequence[Sequence[Cell]]


def format_cell(value: Cell) -> str:
    """
    Format a table cell, writing floating point values with twelve
    significant digits and flags as integers.
    """

    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


class TableWriter(Writer[Table]):
    """
    CSV file writer.
    """

    _newline: str | None = ""

    @override
    def serialize(self, file: TextIO) -> None:
        table = self._model
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            if len(row) != len(table.header):
                raise ValueError(
                    f"Row {row!r} does not match header {table.header!r}"
                )
            writer.writerow([format_cell(value) for value in row])
