"""
Convergence and inf-sup studies over mesh refinement levels.
"""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..assembly.base import CouplingConfig, Variant
from ..assembly.coupling import assemble_coupling
from ..assembly.loads import assemble_loads
from ..config import RunConfig
from ..io.table import Table
from ..mesh.base import FloatArray
from ..mesh.fluid import FluidMesh, build_rect_fluid_mesh
from ..mesh.solid import (
    SolidMesh,
    build_solid_curve_mesh,
    build_solid_disk_mesh,
    build_solid_square_mesh,
    circle_samples,
)
from ..saddle.blocks import assemble_blocks, build_spaces
from ..saddle.infsup import estimate_infsup, infsup_operands
from ..saddle.system import (
    RESIDUAL_TOLERANCE,
    SaddleRHS,
    SaddleSolution,
    build_system,
    solve,
)
from ..scheme.setup import build_solid
from .base import InfSupFailure, SlopeFailure
from .mms import (
    MMS_TOLERANCE,
    MMSCase,
    case_coupling,
    case_meshes,
    check_case,
    solid_cells,
)
from .norms import NORM_NAMES, ErrorNorms, as_array, error_norms

LOGGER = logging.getLogger(__name__)

# Finest disk refinement tried when matching a solid mesh size
MAX_DISK_REFINE = 6


class StudyLevelError(RuntimeError):
    """
    Error indicating that the computation of one level of a study failed.
    """

    def __init__(self, level: int, error: Exception) -> None:
        super().__init__(f"Level {level} failed: {error}")
        self.level: int = level


class Level(NamedTuple):
    """
    Mesh sizes of one refinement level.
    """

    nx: int
    cells: int
    h_x: float
    h_s: float


def _fit_slope(h: FloatArray, errors: FloatArray) -> float:
    if np.any(errors <= 0.0) or np.any(h <= 0.0):
        return float("nan")
    slope, _ = np.polyfit(np.log(h), np.log(errors), 1)
    return float(slope)


@dataclass
class ConvergenceReport:
    """
    Errors and observed rates of a convergence study.
    """

    levels: list[Level]
    errors: list[ErrorNorms]
    fixed_solid: bool = False
    slopes: dict[str, float] = field(init=False)

    def __post_init__(self) -> None:
        h = np.array([level.h_x for level in self.levels])
        values = np.array([as_array(error) for error in self.errors])
        self.slopes = {
            name: _fit_slope(h, values[:, index])
            for index, name in enumerate(NORM_NAMES)
        }
        self.slopes["combined"] = _fit_slope(
            h, np.array([error.combined for error in self.errors])
        )

    def verdict(self, min_slope: float) -> list[str]:
        """
        Determine which expected properties of the study do not hold: every
        error decreases strictly under refinement, the combined error
        converges at least at `min_slope` and the L2 velocity error
        converges faster than the H1 velocity error. A study with a fixed
        solid mesh expects an error plateau, so it has no verdict.
        """

        if self.fixed_solid:
            return []
        failures: list[str] = []
        for index, name in enumerate(NORM_NAMES):
            values = [as_array(error)[index] for error in self.errors]
            if any(b >= a for a, b in zip(values, values[1:], strict=False)):
                failures.append(f"{name} does not decrease: {values}")
        combined = self.slopes["combined"]
        if not combined >= min_slope:
            failures.append(
                f"combined slope {combined:.3f} is below {min_slope:.3f}"
            )
        if not self.slopes["u_l2"] > self.slopes["u_h1"]:
            failures.append(
                f"u_l2 slope {self.slopes['u_l2']:.3f} is not above "
                + f"u_h1 slope {self.slopes['u_h1']:.3f}"
            )
        return failures

    def check(self, min_slope: float) -> None:
        """
        Raise `SlopeFailure` when the verdict of the study is negative.
        """

        failures = self.verdict(min_slope)
        if failures:
            raise SlopeFailure("; ".join(failures))

    def table(self) -> Table:
        """
        Create the error table with one row per level.
        """

        header = (
            ("level", "nx", "solid_cells", "h_x", "h_s")
            + NORM_NAMES
            + ("combined",)
        )
        rows = [
            (index, *level, *as_array(error), error.combined)
            for index, (level, error) in enumerate(
                zip(self.levels, self.errors, strict=True)
            )
        ]
        return Table(header, rows)

    def slope_table(self) -> Table:
        """
        Create the table of least-squares convergence rates.
        """

        return Table(("norm", "slope"), list(self.slopes.items()))


class _LevelTask:
    def __init__(
        self,
        case: MMSCase,
        cells: Sequence[int],
        quad_degree: int,
        tolerance: float,
    ) -> None:
        self.case: MMSCase = case
        self.cells: Sequence[int] = cells
        self.quad_degree: int = quad_degree
        self.tolerance: float = tolerance

    def __call__(self, index: int, nx: int) -> tuple[Level, ErrorNorms]:
        cells = self.cells[index]
        try:
            solution = solve_case(
                self.case, nx, cells, self.quad_degree, self.tolerance
            )
            errors = error_norms(solution, self.case)
        except (RuntimeError, ValueError) as error:
            raise StudyLevelError(index, error) from error
        mesh = solution.u.space.mesh
        solid = solution.x.space.mesh
        level = Level(nx, cells, mesh.h, solid.h)
        LOGGER.info(
            "Level %d with h_x=%.4g and h_s=%.4g: combined error %.4e",
            index,
            level.h_x,
            level.h_s,
            errors.combined,
        )
        return level, errors


def _in_order(
    workers: int, levels: Sequence[int], task: _LevelTask
) -> list[tuple[Level, ErrorNorms]]:
    if workers <= 1:
        return [task(index, nx) for index, nx in enumerate(levels)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(task, range(len(levels)), levels))


def solve_case(
    case: MMSCase,
    nx: int,
    cells: int,
    quad_degree: int = 5,
    tolerance: float = RESIDUAL_TOLERANCE,
    subdivisions: int = 2,
) -> SaddleSolution:
    """
    Solve the stationary problem of a manufactured case on a fluid grid with
    `nx` rectangles per side and a solid square with `cells` rectangles per
    side.
    """

    fluid, solid = case_meshes(case, nx, cells)
    spaces = build_spaces(fluid, solid)
    config = case_coupling(case, spaces, quad_degree)
    blocks = assemble_blocks(spaces, case.params, config)
    rhs_u, rhs_x, rhs_lambda = assemble_loads(
        spaces.velocity,
        spaces.solid,
        spaces.multiplier,
        case.f,
        case.g,
        case.d,
        config,
        subdivisions,
    )
    return solve(
        build_system(blocks), SaddleRHS(rhs_u, rhs_x, rhs_lambda), tolerance
    )


def study_levels(base: int, count: int) -> list[int]:
    """
    Create the numbers of fluid grid rectangles per side of study levels,
    doubling from `base`.
    """

    return [base * 2**level for level in range(count)]


def convergence_study(
    case: MMSCase,
    levels: Sequence[int],
    ratio: float = 0.5,
    fix_solid: bool = False,
    quad_degree: int = 5,
    workers: int = 1,
    tolerance: float = RESIDUAL_TOLERANCE,
    mms_tolerance: float = MMS_TOLERANCE,
) -> ConvergenceReport:
    """
    Solve a manufactured case on fluid grids with `levels` rectangles per
    side and compute the errors and observed rates.

    The solid mesh keeps the fluid to solid mesh size `ratio`, or with
    `fix_solid` stays at the mesh of the coarsest level. The data of the
    case is checked against its exact fields first. Levels are solved by up
    to `workers` threads and reported in order.
    """

    if len(levels) < 3:
        raise ValueError(
            f"Convergence rates require at least 3 levels, got {len(levels)}"
        )
    if any(b <= a for a, b in zip(levels, levels[1:], strict=False)):
        raise ValueError(f"Levels must refine strictly: {list(levels)}")
    _ = check_case(case, mms_tolerance)

    cells = [
        solid_cells(levels[0] if fix_solid else nx, ratio) for nx in levels
    ]
    task = _LevelTask(case, cells, quad_degree, tolerance)
    results = _in_order(workers, levels, task)
    report = ConvergenceReport(
        [level for level, _ in results],
        [errors for _, errors in results],
        fixed_solid=fix_solid,
    )
    LOGGER.info("Convergence slopes: %s", report.slopes)
    return report


class InfSupRow(NamedTuple):
    """
    Inf-sup estimate of one mesh pair. The `ratio` is the requested fluid to
    solid mesh size ratio of the scan and `measured` is h_x / h_s of the
    meshes that were built for it.
    """

    level: int
    h_x: float
    h_s: float
    ratio: float
    measured: float
    beta_h: float
    variant: Variant
    codim: int


INFSUP_HEADER = (
    "level",
    "h_x",
    "h_s",
    "ratio",
    "measured",
    "beta_h",
    "variant",
    "codim",
)


@dataclass
class InfSupReport:
    """
    Inf-sup estimates of a scan over levels and mesh size ratios.
    """

    rows: list[InfSupRow]
    codim: int

    def betas(self, ratio: float) -> list[float]:
        """
        Retrieve the estimates of one ratio in the order of the levels.
        """

        return [row.beta_h for row in self.rows if row.ratio == ratio]

    def verdict(self, max_spread: float) -> list[str]:
        """
        Determine which expected properties of the scan do not hold.

        Every estimate is positive. Across levels at a fixed ratio, the
        largest estimate is at most `max_spread` times the smallest one; for
        thin solids this is only expected for fluid meshes at most half as
        fine as the solid mesh. For thin solids, the estimates of a level do
        not increase as the ratio increases.
        """

        failures = [
            f"level {row.level} ratio {row.ratio}: estimate {row.beta_h}"
            for row in self.rows
            if not row.beta_h > 0.0
        ]
        for ratio in sorted({row.ratio for row in self.rows}):
            if self.codim == 1 and ratio > 0.5:
                continue
            betas = self.betas(ratio)
            if len(betas) > 1 and min(betas) > 0.0:
                spread = max(betas) / min(betas)
                if spread > max_spread:
                    failures.append(
                        f"ratio {ratio}: estimates vary by {spread:.3f}"
                    )
        if self.codim == 1:
            for level in sorted({row.level for row in self.rows}):
                ordered = sorted(
                    (row.ratio, row.beta_h)
                    for row in self.rows
                    if row.level == level
                )
                betas = [beta for _, beta in ordered]
                if any(
                    b > a * (1.0 + 1e-8)
                    for a, b in zip(betas, betas[1:], strict=False)
                ):
                    failures.append(
                        f"level {level}: estimates increase with the ratio "
                        + f"{betas}"
                    )
        return failures

    def check(self, max_spread: float) -> None:
        """
        Raise `InfSupFailure` when the verdict of the scan is negative.
        """

        failures = self.verdict(max_spread)
        if failures:
            raise InfSupFailure("; ".join(failures))

    def table(self) -> Table:
        """
        Create the table of estimates with one row per mesh pair.
        """

        return Table(INFSUP_HEADER, [tuple(row) for row in self.rows])


def _fluid_width(config: RunConfig) -> float:
    x0, x1, _, _ = config.fluid.bounds
    return (x1 - x0) / config.fluid.nx


def _scaled_fluid(config: RunConfig, width: float) -> FluidMesh:
    x0, x1, y0, y1 = config.fluid.bounds
    nx = max(1, round((x1 - x0) / width))
    ny = max(1, round((y1 - y0) / width))
    return build_rect_fluid_mesh(nx, ny, config.fluid.bounds)


def solid_with_size(config: RunConfig, size: float) -> SolidMesh:
    """
    Build the configured solid shape with a mesh size close to `size`.
    """

    solid = config.solid
    if solid.kind == "curve":
        segments = max(3, round(2.0 * np.pi * solid.radius / size))
        return build_solid_curve_mesh(
            circle_samples(solid.center, solid.radius, segments), closed=True
        )
    if solid.kind == "square":
        x0, x1, _, _ = solid.bounds
        cells = max(1, round((x1 - x0) / size))
        return build_solid_square_mesh(solid.bounds, cells)

    best: SolidMesh | None = None
    for refine in range(MAX_DISK_REFINE + 1):
        mesh = build_solid_disk_mesh(solid.center, solid.radius, refine)
        if best is None or abs(np.log(mesh.h / size)) < abs(
            np.log(best.h / size)
        ):
            best = mesh
        if mesh.h < size:
            break
    if best is None:
        raise ValueError("No disk refinement matches the mesh size")
    return best


def infsup_pair(
    fluid: FluidMesh,
    solid: SolidMesh,
    variant: Variant,
    quad_degree: int = 5,
    workers: int = 1,
) -> float:
    """
    Estimate the inf-sup constant of the coupling between a fluid mesh and
    a solid mesh in its reference position.
    """

    spaces = build_spaces(fluid, solid)
    codim = getattr(solid, "codim", 0)
    xbar = spaces.solid.interpolate(lambda points: points)
    config = CouplingConfig(variant, codim, xbar, quad_degree)
    fluid_coupling, solid_coupling = assemble_coupling(
        spaces.velocity, spaces.solid, spaces.multiplier, config, workers
    )
    operands = infsup_operands(
        spaces.velocity, spaces.solid, fluid_coupling, solid_coupling, codim
    )
    return estimate_infsup(*operands)


def infsup_study(
    config: RunConfig, ratios: Iterable[float] | None = None
) -> InfSupReport:
    """
    Estimate inf-sup constants per study level and fluid to solid mesh size
    ratio of the configured solid.

    Each level halves the fluid mesh size of the configured grid. With a
    fixed solid, the solid mesh of each level is the configured one refined
    as often as the level number and the fluid mesh is chosen to match each
    ratio; otherwise the solid mesh is chosen to match the ratio.
    """

    ratio_list = list(config.study.ratios if ratios is None else ratios)
    if not ratio_list or any(ratio <= 0.0 for ratio in ratio_list):
        raise ValueError(f"Ratios must be positive, got {ratio_list}")
    scheme = config.scheme
    rows: list[InfSupRow] = []
    for level in range(config.study.levels):
        width = _fluid_width(config) / 2**level
        fixed = build_solid(config, level) if config.study.fix_solid else None
        for ratio in ratio_list:
            try:
                if fixed is None:
                    fluid = _scaled_fluid(config, width)
                    solid = solid_with_size(config, fluid.h / ratio)
                else:
                    solid = fixed
                    fluid = _scaled_fluid(config, ratio * solid.h)
                beta = infsup_pair(
                    fluid,
                    solid,
                    scheme.coupling,
                    scheme.quad_degree,
                    scheme.workers,
                )
            except (RuntimeError, ValueError) as error:
                raise StudyLevelError(level, error) from error
            LOGGER.info(
                "Level %d ratio %g (measured %.3g): h_x=%.4g h_s=%.4g "
                + "beta=%.6g",
                level,
                ratio,
                fluid.h / solid.h,
                fluid.h,
                solid.h,
                beta,
            )
            rows.append(
                InfSupRow(
                    level,
                    fluid.h,
                    solid.h,
                    ratio,
                    fluid.h / solid.h,
                    beta,
                    scheme.coupling,
                    scheme.codim,
                )
            )
    return InfSupReport(rows, scheme.codim)
