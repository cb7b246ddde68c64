"""
Tests for the fluid operator, convection and divergence matrices.
"""

import unittest
from typing import final

import numpy as np

from dlmfd.assembly.base import ModelParams
from dlmfd.assembly.fluid import (
    assemble_convection,
    assemble_divergence,
    assemble_fluid_operator,
    assemble_viscous,
)
from dlmfd.assembly.forms import assemble_mass
from dlmfd.fem.space import build_space
from dlmfd.mesh.base import FloatArray
from dlmfd.mesh.fluid import build_rect_fluid_mesh


def _rotation(points: FloatArray) -> FloatArray:
    x, y = points.T
    return np.column_stack((0.3 - y, x - 1.0))


@final
class FluidOperatorTest(unittest.TestCase):
    """
    Tests for the fluid operator and the viscous form.
    """

    def setUp(self) -> None:
        self.mesh = build_rect_fluid_mesh(2, 2, (0.0, 1.0, 0.0, 1.0))
        self.velocity = build_space(self.mesh, "P2", 2)
        self.params = ModelParams(alpha=2.0, beta=1.0, gamma=1.0, nu=0.3)

    def test_fluid_operator(self) -> None:
        """
        Test symmetry and the mass part of the fluid operator.
        """

        operator = assemble_fluid_operator(self.velocity, self.params)
        self.assertAlmostEqual(abs(operator - operator.T).max(), 0.0)
        eigenvalues = np.linalg.eigvalsh(operator.toarray())
        self.assertGreater(eigenvalues.min(), 0.0)

        mass = assemble_fluid_operator(
            self.velocity, self.params, mass_only=True, workers=2
        )
        difference = mass - 2.0 * assemble_mass(self.velocity)
        self.assertAlmostEqual(abs(difference).max(), 0.0)

        with self.assertRaises(ValueError):
            _ = assemble_fluid_operator(
                build_space(self.mesh, "P2", 1), self.params
            )

    def test_viscous(self) -> None:
        """
        Test the symmetric gradient form on rigid and straining motions.
        """

        viscous = assemble_viscous(self.velocity, 0.3)
        rigid = self.velocity.interpolate(_rotation).coefficients
        np.testing.assert_allclose(viscous @ rigid, 0.0, atol=1e-12)

        strain = self.velocity.interpolate(
            lambda p: np.column_stack((p[:, 0], -p[:, 1]))
        ).coefficients
        self.assertAlmostEqual(float(strain @ viscous @ strain), 0.6)

        shear = self.velocity.interpolate(
            lambda p: np.column_stack((p[:, 1], np.zeros(len(p))))
        ).coefficients
        self.assertAlmostEqual(float(shear @ viscous @ shear), 0.15)

        full = assemble_fluid_operator(self.velocity, self.params)
        mass = assemble_mass(self.velocity)
        self.assertAlmostEqual(abs(full - 2.0 * mass - viscous).max(), 0.0)

    def test_convection(self) -> None:
        """
        Test skew symmetry of the lagged convection form.
        """

        w = self.velocity.interpolate(_rotation)
        convection = assemble_convection(self.velocity, w, rho_f=1.5)
        self.assertAlmostEqual(abs(convection + convection.T).max(), 0.0)
        u = np.random.default_rng(0).standard_normal(self.velocity.n_dofs)
        self.assertAlmostEqual(float(u @ convection @ u), 0.0)
        self.assertGreater(abs(convection).max(), 0.0)

        other = build_space(self.mesh, "P2", 2)
        with self.assertRaises(ValueError):
            _ = assemble_convection(self.velocity, other.zero())

    def test_divergence(self) -> None:
        """
        Test the divergence matrix against integrals of the divergence.
        """

        pressure = build_space(self.mesh, "P1", 1)
        divergence = assemble_divergence(self.velocity, pressure)
        self.assertEqual(
            divergence.shape, (pressure.n_dofs, self.velocity.n_dofs)
        )
        constant = self.velocity.interpolate(
            lambda p: np.tile([1.0, -2.0], (len(p), 1))
        ).coefficients
        np.testing.assert_allclose(divergence @ constant, 0.0, atol=1e-12)
        radial = self.velocity.interpolate(lambda p: p).coefficients
        self.assertAlmostEqual(float((divergence @ radial).sum()), 2.0)
        rigid = self.velocity.interpolate(_rotation).coefficients
        np.testing.assert_allclose(divergence @ rigid, 0.0, atol=1e-12)

        coarse = build_rect_fluid_mesh(1, 1, (0.0, 1.0, 0.0, 1.0))
        with self.assertRaises(ValueError):
            _ = assemble_divergence(
                self.velocity, build_space(coarse, "P1", 1)
            )
