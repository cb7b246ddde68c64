"""
Tests for convergence and inf-sup studies.
"""

import unittest
from typing import final

import numpy as np

from dlmfd.config import parse_config
from dlmfd.mesh.fluid import build_rect_fluid_mesh
from dlmfd.mesh.solid import (
    ThickSolidMesh,
    ThinSolidMesh,
    build_solid_square_mesh,
)
from dlmfd.verification.base import InfSupFailure, SlopeFailure
from dlmfd.verification.mms import mms_case
from dlmfd.verification.norms import NORM_NAMES, ErrorNorms
from dlmfd.verification.study import (
    INFSUP_HEADER,
    ConvergenceReport,
    InfSupReport,
    InfSupRow,
    Level,
    convergence_study,
    infsup_pair,
    infsup_study,
    solid_with_size,
    solve_case,
    study_levels,
)
from tests.settings import SettingsTestCase


def synthetic_report(
    rates: tuple[float, ...] = (1.0, 2.0, 1.0, 1.0, 1.0, 1.0),
    fixed_solid: bool = False,
) -> ConvergenceReport:
    """
    Create a convergence report with errors `h^rate` for each norm.
    """

    levels = [Level(nx, nx // 2, 1.0 / nx, 2.0 / nx) for nx in (4, 8, 16)]
    errors = [
        ErrorNorms(*(level.h_x**rate for rate in rates)) for level in levels
    ]
    return ConvergenceReport(levels, errors, fixed_solid=fixed_solid)


@final
class ConvergenceReportTest(unittest.TestCase):
    """
    Tests for convergence reports.
    """

    def test_slopes(self) -> None:
        """
        Test the least-squares rates of each norm.
        """

        report = synthetic_report()
        self.assertEqual(set(report.slopes), {*NORM_NAMES, "combined"})
        self.assertAlmostEqual(report.slopes["u_h1"], 1.0)
        self.assertAlmostEqual(report.slopes["u_l2"], 2.0)
        self.assertAlmostEqual(report.slopes["combined"], 1.0)

    def test_verdict(self) -> None:
        """
        Test the expected properties of a study.
        """

        self.assertEqual(synthetic_report().verdict(0.9), [])
        slow = synthetic_report((0.5, 2.0, 0.5, 0.5, 0.5, 0.5))
        failures = slow.verdict(0.9)
        self.assertEqual(len(failures), 1)
        self.assertIn("combined slope", failures[0])

        flat = synthetic_report((1.0, 1.0, 1.0, 1.0, 1.0, 1.0))
        self.assertEqual(len(flat.verdict(0.9)), 1)
        self.assertIn("u_l2 slope", flat.verdict(0.9)[0])

        stalled = synthetic_report((1.0, 2.0, 0.0, 1.0, 1.0, 1.0))
        messages = stalled.verdict(0.5)
        self.assertTrue(
            any(message.startswith("p_l2 does not") for message in messages)
        )

    def test_fixed_solid(self) -> None:
        """
        Test that studies with a fixed solid mesh have no verdict.
        """

        report = synthetic_report((0.0,) * 6, fixed_solid=True)
        self.assertEqual(report.verdict(0.9), [])
        report.check(0.9)

    def test_check(self) -> None:
        """
        Test raising failures of the verdict.
        """

        synthetic_report().check(0.9)
        with self.assertRaisesRegex(SlopeFailure, "combined slope"):
            synthetic_report().check(1.5)

    def test_nonpositive_error(self) -> None:
        """
        Test that rates of vanishing errors are undefined and fail.
        """

        base = synthetic_report()
        errors = [base.errors[0]._replace(lam_l2=0.0), *base.errors[1:]]
        report = ConvergenceReport(base.levels, errors)
        self.assertTrue(np.isnan(report.slopes["lam_l2"]))

    def test_tables(self) -> None:
        """
        Test the error and rate tables.
        """

        report = synthetic_report()
        table = report.table()
        self.assertEqual(
            table.header[:5], ("level", "nx", "solid_cells", "h_x", "h_s")
        )
        self.assertEqual(table.header[-1], "combined")
        self.assertEqual(len(table.rows), 3)
        self.assertEqual(table.rows[1][:3], (1, 8, 4))
        self.assertEqual(len(table.rows[0]), len(table.header))
        slopes = report.slope_table()
        self.assertEqual(slopes.header, ("norm", "slope"))
        self.assertEqual(len(slopes.rows), len(NORM_NAMES) + 1)


@final
class InfSupReportTest(unittest.TestCase):
    """
    Tests for inf-sup scan reports.
    """

    @staticmethod
    def _rows(
        betas: dict[tuple[int, float], float], codim: int
    ) -> InfSupReport:
        rows = [
            InfSupRow(
                level,
                0.1 / 2**level,
                0.1 / 2**level / ratio,
                ratio,
                ratio,
                beta,
                "L2",
                codim,
            )
            for (level, ratio), beta in betas.items()
        ]
        return InfSupReport(rows, codim)

    def test_thick(self) -> None:
        """
        Test the verdict of a scan with a thick solid.
        """

        report = self._rows(
            {(0, 0.5): 1.2, (1, 0.5): 1.3, (0, 2.0): 1.0, (1, 2.0): 1.1},
            0,
        )
        self.assertEqual(report.betas(0.5), [1.2, 1.3])
        self.assertEqual(report.verdict(2.0), [])
        report.check(2.0)
        with self.assertRaisesRegex(InfSupFailure, "ratio 0.5"):
            report.check(1.05)

    def test_nonpositive(self) -> None:
        """
        Test that vanishing estimates fail.
        """

        report = self._rows({(0, 1.0): 0.0, (1, 1.0): 1.0}, 0)
        failures = report.verdict(2.0)
        self.assertEqual(len(failures), 1)
        self.assertIn("estimate 0.0", failures[0])

    def test_thin(self) -> None:
        """
        Test the verdict of a scan with a thin solid, whose estimates may
        degrade for fine fluid meshes but not increase with the ratio.
        """

        report = self._rows(
            {
                (0, 0.5): 0.8,
                (1, 0.5): 0.7,
                (0, 2.0): 0.3,
                (1, 2.0): 0.01,
            },
            1,
        )
        self.assertEqual(report.verdict(2.0), [])
        increasing = self._rows({(0, 0.5): 0.3, (0, 2.0): 0.8}, 1)
        failures = increasing.verdict(2.0)
        self.assertEqual(len(failures), 1)
        self.assertIn("increase with the ratio", failures[0])

    def test_table(self) -> None:
        """
        Test the table of estimates.
        """

        report = self._rows({(0, 1.0): 1.5}, 0)
        table = report.table()
        self.assertEqual(table.header, INFSUP_HEADER)
        self.assertEqual(table.rows[0][3:], (1.0, 1.0, 1.5, "L2", 0))


@final
class StudyTest(SettingsTestCase):
    """
    Tests for running studies.
    """

    def test_study_levels(self) -> None:
        """
        Test the doubling fluid grids of study levels.
        """

        self.assertEqual(study_levels(8, 3), [8, 16, 32])
        self.assertEqual(study_levels(3, 1), [3])

    def test_solve_case(self) -> None:
        """
        Test solving the manufactured case on a coarse mesh pair.
        """

        solution = solve_case(mms_case(), 4, 2)
        self.assertLess(solution.relative_residual, 1e-10)
        self.assertEqual(solution.x.space.mesh.n_cells, 4 * 2 * 2)

    def test_convergence_study(self) -> None:
        """
        Test that errors decrease on refined levels in order.
        """

        report = convergence_study(mms_case(), [2, 4, 8])
        self.assertEqual([level.nx for level in report.levels], [2, 4, 8])
        self.assertEqual([level.cells for level in report.levels], [1, 1, 2])
        self.assertLess(
            report.errors[-1].combined, report.errors[0].combined
        )

        threaded = convergence_study(mms_case(), [2, 4, 8], workers=3)
        for errors, expected in zip(
            threaded.errors, report.errors, strict=True
        ):
            self.assertAlmostEqual(errors.combined, expected.combined)

        fixed = convergence_study(mms_case(), [2, 4, 8], fix_solid=True)
        self.assertEqual([level.cells for level in fixed.levels], [1, 1, 1])
        self.assertEqual(fixed.verdict(0.9), [])

    def test_convergence_study_levels(self) -> None:
        """
        Test that studies require at least three strictly refining levels.
        """

        with self.assertRaisesRegex(ValueError, "at least 3"):
            _ = convergence_study(mms_case(), [4, 8])
        with self.assertRaisesRegex(ValueError, "refine strictly"):
            _ = convergence_study(mms_case(), [4, 8, 8])

    def test_solid_with_size(self) -> None:
        """
        Test building solid meshes close to a mesh size.
        """

        square = solid_with_size(parse_config(""), 0.125)
        self.assertIsInstance(square, ThickSolidMesh)
        self.assertEqual(square.n_cells, 4 * 4 * 4)

        curve = solid_with_size(
            parse_config('solid.kind = "curve"\nscheme.codim = 1\n'), 0.1
        )
        self.assertIsInstance(curve, ThinSolidMesh)
        self.assertEqual(curve.n_cells, round(2.0 * np.pi * 0.2 / 0.1))

        disk = solid_with_size(parse_config('solid.kind = "disk"\n'), 0.05)
        self.assertLess(abs(np.log(disk.h / 0.05)), np.log(2.0))

    def test_infsup_pair(self) -> None:
        """
        Test that the thick L2 estimate is bounded below by one.
        """

        fluid = build_rect_fluid_mesh(4, 4, (0.0, 1.0, 0.0, 1.0))
        solid = build_solid_square_mesh((0.25, 0.75, 0.25, 0.75), 2)
        beta = infsup_pair(fluid, solid, "L2")
        self.assertGreaterEqual(beta, 1.0 - 1e-8)

    def test_infsup_study(self) -> None:
        """
        Test a scan over levels and mesh size ratios.
        """

        config = parse_config("study.levels = 2\nstudy.ratios = [0.5, 1.0]\n")
        report = infsup_study(config)
        self.assertEqual(len(report.rows), 4)
        self.assertEqual(report.codim, 0)
        self.assertEqual(
            [(row.level, row.ratio) for row in report.rows],
            [(0, 0.5), (0, 1.0), (1, 0.5), (1, 1.0)],
        )
        for row in report.rows:
            self.assertGreaterEqual(row.beta_h, 1.0 - 1e-8)
            self.assertEqual(row.variant, "L2")
            self.assertAlmostEqual(row.measured, row.h_x / row.h_s)

        single = infsup_study(config, ratios=[2.0])
        self.assertEqual([row.ratio for row in single.rows], [2.0, 2.0])
        with self.assertRaisesRegex(ValueError, "positive"):
            _ = infsup_study(config, ratios=[0.0])

    def test_infsup_study_fixed_curve(self) -> None:
        """
        Test a scan that keeps the curve mesh and adapts the fluid mesh to
        each ratio.
        """

        config = parse_config(
            'solid.kind = "curve"\nscheme.codim = 1\nsolid.segments = 8\n'
            + "study.levels = 1\nstudy.fix_solid = true\n"
        )
        report = infsup_study(config, ratios=[0.5, 1.0])
        self.assertEqual(report.codim, 1)
        self.assertEqual(len(report.rows), 2)
        fine, coarse = report.rows
        self.assertEqual(fine.h_s, coarse.h_s)
        self.assertLess(fine.h_x, coarse.h_x)
        for row in report.rows:
            self.assertAlmostEqual(row.measured, row.h_x / row.h_s)
            self.assertAlmostEqual(row.measured, row.ratio, delta=0.25)
            self.assertGreater(row.beta_h, 0.0)
