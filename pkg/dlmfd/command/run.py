"""
Run orchestration shared by the solver subcommands.
"""

import logging
from abc import ABCMeta
from collections.abc import Sequence
from pathlib import Path
from typing import ClassVar

from typing_extensions import override

from ..config import Mode, RunConfig, RunSection, default_config
from ..io.config import ConfigReader
from ..io.manifest import ManifestWriter, build_manifest
from ..io.table import TableWriter
from ..scheme.run import run as run_simulation, solve_static
from ..scheme.setup import model_params
from ..verification.base import EnergyViolation, VerificationFailure
from ..verification.mms import mms_case
from ..verification.study import (
    convergence_study,
    infsup_study,
    study_levels,
)
from .base import EXIT_SUCCESS, EXIT_VERIFICATION, Base, SubparserArguments

LOGGER = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.toml"

Results = dict[str, object]


def _solve_static(
    config: RunConfig, directory: Path, results: Results
) -> None:
    result = solve_static(config, directory)
    results["relative_residual"] = result.solution.relative_residual
    results["residuals"] = "residuals.csv"


def _simulate(config: RunConfig, directory: Path, results: Results) -> None:
    trajectory = run_simulation(config, directory)
    results.update(
        {
            "steps": trajectory.state.n,
            "time": trajectory.state.t,
            "initial_energy": trajectory.initial.total,
            "final_energy": (
                trajectory.energies[-1].total
                if trajectory.energies
                else trajectory.initial.total
            ),
            "violations": len(trajectory.violations),
            "energy": "energy.csv",
        }
    )
    if trajectory.violations:
        steps = ", ".join(str(n) for n in trajectory.violations)
        raise EnergyViolation(
            f"Energy inequality violated at steps {steps}",
            trajectory.violations[0],
            max(trajectory.excesses),
        )


def _mms_convergence(
    config: RunConfig, directory: Path, results: Results, levels: int | None
) -> None:
    study = config.study
    report = convergence_study(
        mms_case(model_params(config)),
        study_levels(study.base, study.levels if levels is None else levels),
        ratio=study.ratio,
        fix_solid=study.fix_solid,
        quad_degree=config.scheme.quad_degree,
        workers=config.scheme.workers,
        tolerance=config.tolerance.residual,
        mms_tolerance=config.tolerance.mms,
    )
    TableWriter(directory / "convergence.csv", report.table()).write()
    TableWriter(directory / "slopes.csv", report.slope_table()).write()
    results.update(
        {f"slope.{name}": slope for name, slope in report.slopes.items()}
    )
    results["convergence"] = "convergence.csv"
    report.check(config.tolerance.slope)


def _infsup_scan(
    config: RunConfig,
    directory: Path,
    results: Results,
    ratios: Sequence[float] | None,
) -> None:
    report = infsup_study(config, ratios)
    TableWriter(directory / "infsup.csv", report.table()).write()
    betas = [row.beta_h for row in report.rows]
    results["beta_min"] = min(betas)
    results["beta_max"] = max(betas)
    results["infsup"] = "infsup.csv"
    report.check(config.tolerance.infsup)


def dispatch(
    config: RunConfig,
    directory: Path | None = None,
    levels: int | None = None,
    ratios: Sequence[float] | None = None,
) -> int:
    """
    Run the mode of a configuration, writing its outputs and a manifest to
    the output directory, which defaults to the configured directory.

    Returns 0 on success and 2 when a property check of the results failed.
    The manifest records the outcome in both cases. Other errors propagate.
    """

    target = Path(config.output.directory) if directory is None else directory
    target.mkdir(parents=True, exist_ok=True)
    mode = config.run.mode
    results: Results = {}
    status = EXIT_SUCCESS
    try:
        if mode == "solve-static":
            _solve_static(config, target, results)
        elif mode == "simulate":
            _simulate(config, target, results)
        elif mode == "mms-convergence":
            _mms_convergence(config, target, results, levels)
        else:
            _infsup_scan(config, target, results, ratios)
    except VerificationFailure as error:
        LOGGER.error("Verification failed: %s", error)
        results["failure"] = str(error)
        status = EXIT_VERIFICATION
    results["status"] = "passed" if status == EXIT_SUCCESS else "failed"
    manifest = build_manifest(config, results)
    ManifestWriter(target / MANIFEST_NAME, manifest).write()
    return status


def with_mode(config: RunConfig, mode: Mode) -> RunConfig:
    """
    Create a copy of a configuration with another run mode.
    """

    return config.model_copy(update={"run": RunSection(mode=mode)})


class RunCommand(Base, metaclass=ABCMeta):
    """
    Command which runs one mode of the solver for a configuration file.
    """

    mode: ClassVar[Mode]

    common_arguments: ClassVar[SubparserArguments] = [
        (
            ("-c", "--config"),
            {
                "dest": "config_path",
                "metavar": "F",
                "help": "Run configuration file, defaults from settings",
            },
        ),
        (
            ("-o", "--output"),
            {"help": "Output directory instead of the configured one"},
        ),
    ]

    def __init__(self) -> None:
        super().__init__()
        self.config_path: str | None = None
        self.output: str | None = None
        self.levels: int | None = None
        self.ratios: list[float] | None = None

    def load(self) -> RunConfig:
        """
        Read the run configuration of the command, or the defaults from the
        settings without a configuration file, and set its mode.
        """

        if self.config_path is None:
            config = default_config(self.settings)
        else:
            config = ConfigReader(Path(self.config_path)).read()
        return with_mode(config, self.mode)

    @override
    def run(self) -> int:
        config = self.load()
        directory = None if self.output is None else Path(self.output)
        self.logger.info("Running %s", config.run.mode)
        return dispatch(config, directory, self.levels, self.ratios)
