"""
Simulation runs with snapshots and the energy audit.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..config import RunConfig
from ..io.matrix import dump_matrices
from ..io.table import Table, TableWriter
from ..io.vtk import VTKWriter, fluid_data, solid_data
from ..saddle.blocks import build_spaces
from ..saddle.system import BlockOperator, SaddleSolution
from ..verification.base import EnergyViolation
from .setup import (
    build_fluid,
    build_solid,
    initial_map,
    initial_velocity,
    model_params,
    step_options,
)
from .state import EnergyBreakdown, SimState
from .stepper import Stepper

LOGGER = logging.getLogger(__name__)

ENERGY_HEADER = (
    "step",
    "time",
    "kinetic",
    "solid_kinetic",
    "elastic",
    "total",
    "dissipation",
    "violation_flag",
)


@dataclass
class Trajectory:
    """
    Outcome of a simulation run.
    """

    state: SimState
    initial: EnergyBreakdown
    energies: list[EnergyBreakdown] = field(default_factory=list)
    violations: list[int] = field(default_factory=list)
    excesses: list[float] = field(default_factory=list)
    snapshots: list[Path] = field(default_factory=list)
    energy_path: Path | None = None

    def table(self) -> Table:
        """
        Create the energy log with one row per time step.
        """

        dt = self.state.t / self.state.n if self.state.n else 0.0
        rows = [
            (
                n,
                n * dt,
                energy.kinetic,
                energy.solid_kinetic,
                energy.elastic,
                energy.total,
                energy.dissipation,
                n in self.violations,
            )
            for n, energy in enumerate(self.energies, start=1)
        ]
        return Table(ENERGY_HEADER, rows)


def energy_excess(
    before: EnergyBreakdown,
    after: EnergyBreakdown,
    dt: float,
    tolerance: float,
) -> float:
    """
    Compute by how much a step exceeds the discrete energy inequality: the
    energy change rate plus the dissipation rate above the tolerance.
    """

    rate = (after.total - before.total) / dt + after.dissipation / dt
    return rate - tolerance


def dump_state(path: Path, state: SimState) -> Path:
    """
    Save the coefficients of a state in a NumPy archive.
    """

    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(
        path,
        u=state.u.coefficients,
        p=state.p.coefficients,
        x=state.x.coefficients,
        x_prev=state.x_prev.coefficients,
        lam=state.lam.coefficients,
        t=state.t,
        n=state.n,
    )
    return path


class Simulation:
    """
    Time stepping run of a configuration.
    """

    def __init__(self, config: RunConfig, directory: Path | None = None):
        self.config: RunConfig = config
        self.directory: Path = (
            Path(config.output.directory) if directory is None else directory
        )
        fluid = build_fluid(config)
        solid = build_solid(config)
        self.spaces = build_spaces(fluid, solid)
        self.params = model_params(config)
        self.stepper: Stepper = Stepper(
            self.spaces, self.params, step_options(config)
        )

    def _snapshot(self, trajectory: Trajectory, state: SimState) -> None:
        cadence = self.config.output.cadence
        if cadence <= 0 or state.n % cadence != 0:
            return
        refined = self.config.output.refined
        fluid_path = self.directory / f"fluid_{state.n:06d}.vtk"
        solid_path = self.directory / f"solid_{state.n:06d}.vtk"
        VTKWriter(
            fluid_path, fluid_data(state.u, state.p, refined), "fluid"
        ).write()
        VTKWriter(
            solid_path, solid_data(state.x, state.lam), "solid"
        ).write()
        trajectory.snapshots.extend((fluid_path, solid_path))

    def dump_matrices(self, system: BlockOperator) -> list[Path]:
        """
        Write the assembled blocks and the global matrix of a stationary
        problem in MatrixMarket format.
        """

        blocks = system.blocks
        return dump_matrices(
            self.directory / "matrices",
            {
                "fluid": blocks.fluid,
                "divergence": blocks.divergence,
                "solid": blocks.solid_operator,
                "fluid_coupling": blocks.fluid_coupling,
                "solid_coupling": blocks.solid_coupling,
                "system": system.matrix,
            },
        )

    def _write_energy(self, trajectory: Trajectory) -> None:
        path = self.directory / "energy.csv"
        TableWriter(path, trajectory.table()).write()
        trajectory.energy_path = path

    def run(self, steps: int | None = None) -> Trajectory:
        """
        Run the configured number of time steps, or `steps` if given.

        With the audit enabled, every step is checked against the discrete
        energy inequality. Violations are logged, or with a strict audit the
        last state is saved and `EnergyViolation` is raised.
        """

        config = self.config
        audit = config.output.audit
        dt = self.params.dt
        total_steps = config.scheme.steps if steps is None else steps

        x0 = initial_map(config, self.spaces.solid)
        u0 = initial_velocity(config, self.spaces.velocity)
        state = self.stepper.initial_state(u0, x0)
        initial = self.stepper.energy(state)
        trajectory = Trajectory(state, initial)
        tolerance = config.tolerance.energy * initial.total
        LOGGER.info(
            "Simulating %d steps of %g, initial energy %.6g",
            total_steps,
            dt,
            initial.total,
        )
        if config.output.matrices:
            system, _ = self.stepper.system(state)
            _ = self.dump_matrices(system)
        self._snapshot(trajectory, state)

        previous = initial
        for _ in range(total_steps):
            state = self.stepper.step(state)
            current = self.stepper.energy(state)
            trajectory.state = state
            trajectory.energies.append(current)
            LOGGER.debug(
                "Step %d: kinetic %.6g, solid %.6g, elastic %.6g, "
                + "dissipation %.6g",
                state.n,
                current.kinetic,
                current.solid_kinetic,
                current.elastic,
                current.dissipation,
            )
            excess = energy_excess(previous, current, dt, tolerance)
            if audit != "off" and excess > 0.0:
                trajectory.violations.append(state.n)
                trajectory.excesses.append(excess)
                LOGGER.warning(
                    "Energy inequality violated at step %d by %.3e",
                    state.n,
                    excess,
                )
                if audit == "strict":
                    self._write_energy(trajectory)
                    path = dump_state(self.directory / "state.npz", state)
                    raise EnergyViolation(
                        f"Energy inequality violated at step {state.n} by "
                        + f"{excess:.3e}; state saved to {path}",
                        state.n,
                        excess,
                    )
            self._snapshot(trajectory, state)
            previous = current

        self._write_energy(trajectory)
        LOGGER.info(
            "Finished at t=%g with energy %.6g and %d violations",
            state.t,
            previous.total,
            len(trajectory.violations),
        )
        return trajectory


def run(config: RunConfig, directory: Path | None = None) -> Trajectory:
    """
    Run the simulation of a configuration, writing snapshots at the
    configured cadence and the energy log to the output directory.
    """

    return Simulation(config, directory).run()


@dataclass
class StaticResult:
    """
    Outcome of a single stationary solve.
    """

    state: SimState
    solution: SaddleSolution
    snapshots: list[Path] = field(default_factory=list)
    residual_path: Path | None = None

    def table(self) -> Table:
        """
        Create the residual report with one row per equation.
        """

        report = self.solution.residuals
        rows = [
            ("momentum", report.momentum),
            ("mass", report.mass),
            ("solid", report.solid),
            ("constraint", report.constraint),
            ("mean", report.mean),
            ("total", report.total),
            ("relative", self.solution.relative_residual),
        ]
        return Table(("equation", "residual"), rows)


def solve_static(
    config: RunConfig, directory: Path | None = None
) -> StaticResult:
    """
    Solve the stationary problem of the first time step of a configuration
    and write the solution and the residual report to the output directory.
    """

    simulation = Simulation(config, directory)
    spaces = simulation.spaces
    x0 = initial_map(config, spaces.solid)
    u0 = initial_velocity(config, spaces.velocity)
    initial = simulation.stepper.initial_state(u0, x0)
    if config.output.matrices:
        system, _ = simulation.stepper.system(initial)
        _ = simulation.dump_matrices(system)
    state, solution = simulation.stepper.advance(initial)

    result = StaticResult(state, solution)
    target = simulation.directory
    fluid_path = target / "fluid.vtk"
    solid_path = target / "solid.vtk"
    fluid = fluid_data(state.u, state.p, config.output.refined)
    VTKWriter(fluid_path, fluid, "fluid").write()
    VTKWriter(solid_path, solid_data(state.x, state.lam), "solid").write()
    result.snapshots.extend((fluid_path, solid_path))
    result.residual_path = target / "residuals.csv"
    TableWriter(result.residual_path, result.table()).write()
    LOGGER.info(
        "Stationary solve with relative residual %.3e",
        solution.relative_residual,
    )
    return result
