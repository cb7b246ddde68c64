"""
Tests for the solid operator.
"""

import unittest
from typing import final

import numpy as np

from dlmfd.assembly.base import ModelParams
from dlmfd.assembly.forms import assemble_integrals
from dlmfd.assembly.solid import assemble_solid_operator
from dlmfd.fem.space import FESpace, Field, build_space
from dlmfd.mesh.base import FloatArray
from dlmfd.mesh.solid import (
    ThickSolidMesh,
    build_solid_curve_mesh,
    build_solid_square_mesh,
    circle_samples,
)


def _constant(value: tuple[float, float]) -> Field:
    def field(points: FloatArray) -> FloatArray:
        return np.tile(value, (len(points), 1))

    return field


@final
class SolidOperatorTest(unittest.TestCase):
    """
    Tests for the weighted mass and stiffness operator of solid maps.
    """

    def setUp(self) -> None:
        square = build_solid_square_mesh((0.25, 0.75, 0.25, 0.75), 2)
        curve = build_solid_curve_mesh(
            circle_samples((0.5, 0.5), 0.2, 12), closed=True
        )
        self.spaces: dict[str, FESpace] = {
            "thick": build_space(square, "P1", 2),
            "thin": build_space(curve, "P1", 2),
        }

    def test_elastic_kernel(self) -> None:
        """
        Test that without excess density the kernel of the operator consists
        of the constant maps.
        """

        params = ModelParams(alpha=1.0, beta=0.0, gamma=0.7, nu=1.0)
        for name, space in self.spaces.items():
            with self.subTest(solid=name):
                operator = assemble_solid_operator(space, params)
                for value in ((1.0, 0.0), (0.0, 1.0)):
                    constant = space.interpolate(_constant(value))
                    np.testing.assert_allclose(
                        operator @ constant.coefficients, 0.0, atol=1e-12
                    )
                eigenvalues = np.linalg.eigvalsh(operator.toarray())
                scale = eigenvalues.max()
                self.assertEqual(int(np.sum(eigenvalues < 1e-10 * scale)), 2)

    def test_positive_definite(self) -> None:
        """
        Test that a positive excess density makes the operator symmetric
        positive definite.
        """

        params = ModelParams(alpha=1.0, beta=0.5, gamma=0.7, nu=1.0)
        for name, space in self.spaces.items():
            with self.subTest(solid=name):
                operator = assemble_solid_operator(space, params, workers=2)
                self.assertAlmostEqual(abs(operator - operator.T).max(), 0.0)
                eigenvalues = np.linalg.eigvalsh(operator.toarray())
                self.assertGreater(eigenvalues.min(), 0.0)

    def test_mass_only(self) -> None:
        """
        Test that the rows of the mass part sum to the weighted integrals of
        the basis functions.
        """

        params = ModelParams(alpha=1.0, beta=0.5, gamma=0.7, nu=1.0)
        for name, space in self.spaces.items():
            with self.subTest(solid=name):
                mass = assemble_solid_operator(space, params, mass_only=True)
                scalar = build_space(space.mesh, "P1", 1)
                integrals = assemble_integrals(scalar)
                np.testing.assert_allclose(
                    mass @ np.ones(space.n_dofs),
                    0.5 * np.concatenate((integrals, integrals)),
                    atol=1e-13,
                )

    def test_reference_triangle(self) -> None:
        """
        Test the operator on the reference triangle against its closed form.
        """

        mesh = ThickSolidMesh(
            vertices=np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
            cells=np.array([[0, 1, 2]]),
        )
        space = build_space(mesh, "P1", 2)
        params = ModelParams(alpha=1.0, beta=1.0, gamma=1.0, nu=1.0)
        operator = assemble_solid_operator(space, params).toarray()

        mass = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]])
        stiffness = np.array(
            [[2.0, -1.0, -1.0], [-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]]
        )
        block = mass / 24.0 + stiffness / 2.0
        expected = np.kron(np.eye(2), block)
        np.testing.assert_allclose(operator, expected, atol=1e-14)

    def test_scalar_space(self) -> None:
        """
        Test that scalar spaces are rejected.
        """

        params = ModelParams(alpha=1.0, beta=0.5, gamma=0.7, nu=1.0)
        space = build_space(self.spaces["thick"].mesh, "P1", 1)
        with self.assertRaises(ValueError):
            _ = assemble_solid_operator(space, params)
