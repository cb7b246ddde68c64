"""
Tests for the block saddle point system of the stationary problem.
"""

import unittest
from dataclasses import replace
from typing import final

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve
from typing_extensions import override

from dlmfd.assembly.base import CouplingConfig, ModelParams
from dlmfd.assembly.forms import assemble_integrals
from dlmfd.mesh.fluid import build_rect_fluid_mesh
from dlmfd.mesh.solid import build_solid_square_mesh
from dlmfd.saddle.blocks import Spaces, assemble_blocks, build_spaces
from dlmfd.saddle.system import (
    BlockOperator,
    BlockShapeError,
    SaddleRHS,
    SingularSystem,
    SystemBlocks,
    build_system,
    residuals,
    solve,
)


def coupled_blocks(
    nx: int = 4, cells: int = 2, coupled: bool = True, beta: float = 1.0
) -> SystemBlocks:
    """
    Assemble the blocks of a small problem with a square solid embedded by
    the identity in the unit square.
    """

    spaces = build_spaces(
        build_rect_fluid_mesh(nx, nx, (0.0, 1.0, 0.0, 1.0)),
        build_solid_square_mesh((0.25, 0.75, 0.25, 0.75), cells),
    )
    config = None
    if coupled:
        xbar = spaces.solid.interpolate(lambda points: points)
        config = CouplingConfig("L2", 0, xbar)
    params = ModelParams(alpha=1.0, beta=beta, gamma=1.0, nu=1.0)
    return assemble_blocks(spaces, params, config)


def random_rhs(blocks: SystemBlocks, seed: int = 0) -> SaddleRHS:
    """
    Create random load vectors for the blocks.
    """

    rng = np.random.default_rng(seed)
    return SaddleRHS(
        u=rng.standard_normal(blocks.velocity.n_dofs),
        x=rng.standard_normal(blocks.solid.n_dofs),
        lam=rng.standard_normal(blocks.n_multipliers),
    )


@final
class BlocksTest(unittest.TestCase):
    """
    Tests for spaces and block assembly.
    """

    def test_build_spaces(self) -> None:
        """
        Test building the four spaces of the coupled problem.
        """

        fluid = build_rect_fluid_mesh(2, 2, (0.0, 1.0, 0.0, 1.0))
        solid = build_solid_square_mesh((0.25, 0.75, 0.25, 0.75), 1)
        spaces = build_spaces(fluid, solid)
        self.assertIsInstance(spaces, Spaces)
        self.assertEqual(spaces.velocity.family, "P2")
        self.assertEqual(spaces.velocity.n_components, 2)
        self.assertEqual(spaces.pressure.family, "P1")
        self.assertEqual(spaces.pressure.n_components, 1)
        self.assertIs(spaces.solid.mesh, solid)
        self.assertIs(spaces.multiplier.mesh, solid)
        self.assertEqual(spaces.multiplier.n_dofs, spaces.solid.n_dofs)

    def test_assemble_blocks(self) -> None:
        """
        Test the shapes of coupled and uncoupled blocks.
        """

        blocks = coupled_blocks()
        self.assertEqual(blocks.n_multipliers, blocks.multiplier.n_dofs)
        self.assertEqual(
            blocks.fluid_coupling.shape,
            (blocks.multiplier.n_dofs, blocks.velocity.n_dofs),
        )
        uncoupled = coupled_blocks(coupled=False)
        self.assertEqual(uncoupled.n_multipliers, 0)
        self.assertEqual(
            uncoupled.solid_coupling.shape, (0, uncoupled.solid.n_dofs)
        )


@final
class SystemTest(unittest.TestCase):
    """
    Tests for the global saddle point matrix and its solution.
    """

    @override
    def setUp(self) -> None:
        self.blocks = coupled_blocks()
        self.system = build_system(self.blocks)

    def test_build_system(self) -> None:
        """
        Test the layout and symmetry of the global matrix.
        """

        sizes = self.system.sizes
        self.assertEqual(sizes[0], len(self.blocks.velocity.free_dofs))
        self.assertEqual(sizes[1], self.blocks.pressure.n_dofs)
        self.assertEqual(sizes[4], 1)
        total = self.system.offsets[-1]
        self.assertEqual(self.system.matrix.shape, (total, total))
        matrix = self.system.matrix
        self.assertAlmostEqual(abs(matrix - matrix.T).max(), 0.0)
        np.testing.assert_allclose(
            self.system.mean, assemble_integrals(self.blocks.pressure)
        )

    def test_shape_errors(self) -> None:
        """
        Test rejecting blocks and loads with inconsistent sizes.
        """

        wrong = replace(
            self.blocks, divergence=sp.csr_matrix(self.blocks.divergence.T)
        )
        with self.assertRaisesRegex(BlockShapeError, "divergence"):
            _ = build_system(wrong)
        rhs = random_rhs(self.blocks)
        with self.assertRaises(BlockShapeError):
            _ = self.system.pack(rhs._replace(x=rhs.x[:-1]))

    def test_zero(self) -> None:
        """
        Test that zero data yields the zero solution.
        """

        blocks = self.blocks
        rhs = SaddleRHS(
            u=np.zeros(blocks.velocity.n_dofs),
            x=np.zeros(blocks.solid.n_dofs),
            lam=np.zeros(blocks.n_multipliers),
        )
        solution = solve(self.system, rhs)
        np.testing.assert_array_equal(solution.u.coefficients, 0.0)
        np.testing.assert_array_equal(solution.p.coefficients, 0.0)
        np.testing.assert_array_equal(solution.x.coefficients, 0.0)
        np.testing.assert_array_equal(solution.lam.coefficients, 0.0)
        self.assertEqual(solution.m, 0.0)
        self.assertEqual(solution.relative_residual, 0.0)

    def test_solve(self) -> None:
        """
        Test the residual contract, boundary values and the pressure mean.
        """

        rhs = random_rhs(self.blocks)
        with self.assertLogs("dlmfd.saddle.system", level="INFO"):
            solution = solve(self.system, rhs)
        self.assertLess(solution.relative_residual, 1e-10)
        boundary = self.blocks.velocity.boundary_dofs
        np.testing.assert_array_equal(solution.u.coefficients[boundary], 0.0)
        self.assertAlmostEqual(
            float(self.system.mean @ solution.p.coefficients), 0.0
        )
        constraint = (
            self.blocks.fluid_coupling @ solution.u.coefficients
            - self.blocks.solid_coupling @ solution.x.coefficients
        )
        np.testing.assert_allclose(constraint, rhs.lam, atol=1e-9)
        # Velocities vanishing on the boundary have no net divergence
        self.assertAlmostEqual(solution.m, 0.0, places=10)

        report = residuals(self.system, solution, rhs)
        self.assertLess(report.total, 1e-9 * np.linalg.norm(rhs.u))

    def test_zero_excess_density(self) -> None:
        """
        Test that a solid as dense as the fluid still gives a nonsingular
        system whose solution meets the residual contract.
        """

        blocks = coupled_blocks(beta=0.0)
        system = build_system(blocks)
        matrix = system.matrix.toarray()
        self.assertEqual(np.linalg.matrix_rank(matrix), matrix.shape[0])

        rhs = random_rhs(blocks, seed=2)
        solution = solve(system, rhs)
        self.assertLess(solution.relative_residual, 1e-10)
        constraint = (
            blocks.fluid_coupling @ solution.u.coefficients
            - blocks.solid_coupling @ solution.x.coefficients
        )
        np.testing.assert_allclose(constraint, rhs.lam, atol=1e-9)

    def test_scale(self) -> None:
        """
        Test that solutions scale with the data.
        """

        rhs = random_rhs(self.blocks, seed=4)
        solution = solve(self.system, rhs)
        scaled = solve(
            self.system, SaddleRHS(2.5 * rhs.u, 2.5 * rhs.x, 2.5 * rhs.lam)
        )
        for name in ("u", "p", "x", "lam"):
            with self.subTest(field=name):
                np.testing.assert_allclose(
                    getattr(scaled, name).coefficients,
                    2.5 * getattr(solution, name).coefficients,
                    rtol=1e-8,
                    atol=1e-12,
                )

    def test_uncoupled(self) -> None:
        """
        Test solving a system without coupling.
        """

        blocks = coupled_blocks(coupled=False)
        system = build_system(blocks)
        self.assertEqual(system.sizes[3], 0)
        rhs = random_rhs(blocks)
        solution = solve(system, rhs)
        self.assertLess(solution.relative_residual, 1e-10)
        self.assertEqual(len(solution.lam.coefficients), blocks.solid.n_dofs)
        np.testing.assert_array_equal(solution.lam.coefficients, 0.0)
        expected = spsolve(
            sp.csc_matrix(blocks.solid_operator), rhs.x
        )
        np.testing.assert_allclose(solution.x.coefficients, expected)

    def test_singular(self) -> None:
        """
        Test reporting a failed factorization.
        """

        system = BlockOperator(
            self.blocks,
            self.system.boundary,
            self.system.free,
            self.system.mean,
            sp.csr_matrix((2, 2)),
        )
        with self.assertRaises(SingularSystem) as context:
            _ = system.factor
        self.assertIsNotNone(context.exception.pivot)
