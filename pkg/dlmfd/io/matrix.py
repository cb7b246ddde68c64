"""
MatrixMarket output of assembled matrices.
"""

import logging
from pathlib import Path

import scipy.io

from ..assembly.base import SparseMatrix

LOGGER = logging.getLogger(__name__)


def dump_matrix(path: Path, matrix: SparseMatrix, comment: str = "") -> Path:
    """
    Write a sparse matrix in MatrixMarket coordinate format. The file name
    receives the `.mtx` suffix.
    """

    target = path.with_suffix(".mtx")
    target.parent.mkdir(parents=True, exist_ok=True)
    scipy.io.mmwrite(target, matrix.tocoo(), comment=comment)
    LOGGER.debug("Dumped %dx%d matrix to %s", *matrix.shape, target)
    return target


def dump_matrices(
    directory: Path, matrices: dict[str, SparseMatrix]
) -> list[Path]:
    """
    Write named matrices to a directory in MatrixMarket format.
    """

    return [
        dump_matrix(directory / name, matrix, comment=name)
        for name, matrix in matrices.items()
    ]
