"""
Tests for the manufactured solution of the stationary problem.
"""

import unittest
from dataclasses import replace
from typing import final

import numpy as np

from dlmfd.assembly.loads import assemble_load
from dlmfd.fem.space import Field, build_space
from dlmfd.mesh.base import FloatArray
from dlmfd.mesh.fluid import build_rect_fluid_mesh
from dlmfd.verification.base import MMSInconsistent, VerificationFailure
from dlmfd.verification.mms import (
    REFERENCE_SQUARE,
    check_case,
    exact_map,
    exact_map_gradient,
    exact_pressure,
    exact_velocity,
    exact_velocity_gradient,
    indicator,
    mms_case,
    solid_cells,
    weak_residual,
)


def central_gradient(field: Field, points: FloatArray) -> FloatArray:
    """
    Approximate the gradient of a vector field with central differences.
    """

    step = 1e-6
    gradient = np.empty((len(points), 2, 2))
    for direction in range(2):
        offset = np.zeros(2)
        offset[direction] = step
        difference = field(points + offset) - field(points - offset)
        gradient[:, :, direction] = difference / (2.0 * step)
    return gradient


@final
class ExactFieldsTest(unittest.TestCase):
    """
    Tests for the exact fields of the manufactured case.
    """

    def setUp(self) -> None:
        self.points: FloatArray = np.random.default_rng(1).uniform(
            0.0, 1.0, (40, 2)
        )

    def test_velocity(self) -> None:
        """
        Test that the exact velocity is divergence free, vanishes on the
        boundary and matches its gradient.
        """

        gradient = exact_velocity_gradient(self.points)
        np.testing.assert_allclose(
            np.trace(gradient, axis1=1, axis2=2), 0.0, atol=1e-12
        )
        np.testing.assert_allclose(
            gradient,
            central_gradient(exact_velocity, self.points),
            atol=1e-6,
        )
        t = np.linspace(0.0, 1.0, 9)
        for boundary in (
            np.column_stack((t, np.zeros(9))),
            np.column_stack((t, np.ones(9))),
            np.column_stack((np.zeros(9), t)),
            np.column_stack((np.ones(9), t)),
        ):
            np.testing.assert_allclose(
                exact_velocity(boundary), 0.0, atol=1e-12
            )

    def test_pressure(self) -> None:
        """
        Test that the exact pressure has zero mean on the unit square.
        """

        mesh = build_rect_fluid_mesh(8, 8, (0.0, 1.0, 0.0, 1.0))
        space = build_space(mesh, "P1", 1)
        load = assemble_load(space, exact_pressure, 8)
        self.assertAlmostEqual(float(load.sum()), 0.0, places=10)

    def test_map(self) -> None:
        """
        Test that the exact solid map matches its gradient, which has zero
        normal derivative on the reference square boundary.
        """

        np.testing.assert_allclose(
            exact_map_gradient(self.points),
            central_gradient(exact_map, self.points),
            atol=1e-6,
        )
        x0, x1, _, _ = REFERENCE_SQUARE
        t = np.linspace(x0, x1, 7)
        left = exact_map_gradient(np.column_stack((np.full(7, x0), t)))
        right = exact_map_gradient(np.column_stack((np.full(7, x1), t)))
        np.testing.assert_allclose(left[:, :, 0], 0.0, atol=1e-12)
        np.testing.assert_allclose(right[:, :, 0], 0.0, atol=1e-12)

    def test_indicator(self) -> None:
        """
        Test the indicator function of a closed rectangle.
        """

        inside = indicator((0.25, 0.75, 0.25, 0.75))
        points = np.array([[0.5, 0.5], [0.25, 0.75], [0.1, 0.5], [0.5, 0.8]])
        np.testing.assert_array_equal(inside(points), [1.0, 1.0, 0.0, 0.0])

    def test_solid_cells(self) -> None:
        """
        Test matching the solid square mesh to a mesh size ratio.
        """

        self.assertEqual(solid_cells(8, 1.0), 4)
        self.assertEqual(solid_cells(8, 0.5), 2)
        self.assertEqual(solid_cells(16, 2.0), 16)
        self.assertEqual(solid_cells(1, 0.5), 1)


@final
class CheckCaseTest(unittest.TestCase):
    """
    Tests for the weak form self-check of manufactured data.
    """

    def test_consistent(self) -> None:
        """
        Test that the derived data satisfies the weak form.
        """

        case = mms_case()
        with self.assertLogs("dlmfd.verification.mms", level="INFO"):
            residual = check_case(case)
        self.assertLess(residual, 1e-8)
        self.assertEqual(residual, weak_residual(case))

    def test_inconsistent(self) -> None:
        """
        Test that perturbed data fails the check.
        """

        case = mms_case()

        def shifted(points: FloatArray) -> FloatArray:
            return case.g(points) + 1.0

        with self.assertRaises(MMSInconsistent) as context:
            _ = check_case(replace(case, g=shifted))
        self.assertIsInstance(context.exception, VerificationFailure)
        self.assertIn("weak residual", str(context.exception))

    def test_tolerance(self) -> None:
        """
        Test that the check honors the tolerance.
        """

        case = mms_case()

        def drifted(points: FloatArray) -> FloatArray:
            return case.d(points) + 1e-3

        residual = weak_residual(replace(case, d=drifted))
        self.assertGreater(residual, 1e-8)
        self.assertLessEqual(
            check_case(replace(case, d=drifted), tolerance=1.0), 1.0
        )
