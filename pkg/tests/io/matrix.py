"""
Tests for MatrixMarket output of assembled matrices.
"""

import unittest
from pathlib import Path
from tempfile import TemporaryDirectory
from typing import final

import numpy as np
import scipy.io
import scipy.sparse as sp

from dlmfd.io.matrix import dump_matrices, dump_matrix


@final
class MatrixTest(unittest.TestCase):
    """
    Tests for writing sparse matrices.
    """

    def test_dump_matrix(self) -> None:
        """
        Test writing a matrix with the MatrixMarket suffix.
        """

        matrix = sp.csr_matrix(np.array([[2.0, 0.0], [-1.0, 3.5]]))
        with TemporaryDirectory() as directory:
            path = dump_matrix(Path(directory) / "sub" / "mass", matrix)
            self.assertEqual(path.name, "mass.mtx")
            read = sp.csr_matrix(scipy.io.mmread(path))
        np.testing.assert_array_equal(read.toarray(), matrix.toarray())

    def test_dump_matrices(self) -> None:
        """
        Test writing named matrices to a directory.
        """

        matrices = {
            "identity": sp.csr_matrix(sp.eye(3)),
            "empty": sp.csr_matrix((2, 4)),
        }
        with TemporaryDirectory() as directory:
            paths = dump_matrices(Path(directory), matrices)
            self.assertEqual(
                [path.name for path in paths], ["identity.mtx", "empty.mtx"]
            )
            header = paths[0].read_text(encoding="utf-8").splitlines()[:2]
            shape = scipy.io.mmread(paths[1]).shape
        self.assertTrue(header[0].startswith("%%MatrixMarket matrix"))
        self.assertIn("identity", header[1])
        self.assertEqual(shape, (2, 4))
