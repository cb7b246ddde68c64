"""
Tests for run orchestration of the solver subcommands.
"""

import logging
from importlib import import_module
from pathlib import Path
from tempfile import TemporaryDirectory
from typing import Any, cast, final
from unittest.mock import MagicMock, patch

import tomlkit
from typing_extensions import override

from dlmfd import __name__ as NAME
from dlmfd.command.base import (
    EXIT_ERROR,
    EXIT_SUCCESS,
    EXIT_VERIFICATION,
    Base,
)
from dlmfd.command.infsup_scan import parse_ratios
from dlmfd.command.run import MANIFEST_NAME, dispatch, with_mode
from dlmfd.config import default_config, parse_config
from dlmfd.verification.base import EnergyViolation

from ..settings import SettingsTestCase


def read_manifest(directory: str) -> dict[str, dict[str, Any]]:
    """
    Read the manifest of a run as nested tables.
    """

    path = Path(directory) / MANIFEST_NAME
    document = tomlkit.parse(path.read_text(encoding="utf-8"))
    return cast(dict[str, dict[str, Any]], document.unwrap())


# ``dlmfd.scheme`` re-exports the ``run`` function, which shadows the
# submodule of the same name for dotted-path lookups.
SCHEME_RUN = import_module("dlmfd.scheme.run")


@final
class DispatchTest(SettingsTestCase):
    """
    Tests for running the mode of a configuration.
    """

    def test_with_mode(self) -> None:
        """
        Test copying a configuration with another mode.
        """

        config = default_config()
        static = with_mode(config, "solve-static")
        self.assertEqual(static.run.mode, "solve-static")
        self.assertEqual(config.run.mode, "simulate")
        self.assertEqual(static.fluid, config.fluid)

    def test_solve_static(self) -> None:
        """
        Test the stationary solve writing its outputs and the manifest.
        """

        config = with_mode(default_config(), "solve-static")
        with TemporaryDirectory() as directory:
            status = dispatch(config, Path(directory))
            manifest = read_manifest(directory)
            for name in ("fluid.vtk", "solid.vtk", "residuals.csv"):
                self.assertTrue((Path(directory) / name).exists())

        self.assertEqual(status, EXIT_SUCCESS)
        result = manifest["result"]
        self.assertEqual(result["status"], "passed")
        self.assertLess(result["relative_residual"], 1e-10)
        run = manifest["run"]
        self.assertEqual(run["mode"], "solve-static")
        self.assertEqual(len(run["config_hash"]), 64)

    def test_simulate(self) -> None:
        """
        Test a simulation writing the energy log and the manifest.
        """

        with TemporaryDirectory() as directory:
            status = dispatch(default_config(), Path(directory))
            self.assertTrue((Path(directory) / "energy.csv").exists())
            manifest = read_manifest(directory)

        self.assertEqual(status, EXIT_SUCCESS)
        result = manifest["result"]
        self.assertEqual(result["steps"], 3)
        self.assertEqual(result["violations"], 0)
        self.assertLess(result["final_energy"], result["initial_energy"])

    @patch("dlmfd.command.run.run_simulation")
    def test_verification_failure(self, simulation: MagicMock) -> None:
        """
        Test that failed checks give exit status 2 and a failed manifest.
        """

        simulation.side_effect = EnergyViolation(
            "Energy inequality violated at step 2", 2, 0.5
        )
        with TemporaryDirectory() as directory:
            with self.assertLogs("dlmfd.command.run", level="ERROR"):
                status = dispatch(default_config(), Path(directory))
            manifest = read_manifest(directory)

        self.assertEqual(status, EXIT_VERIFICATION)
        result = manifest["result"]
        self.assertEqual(result["status"], "failed")
        self.assertIn("step 2", result["failure"])

    @patch.object(SCHEME_RUN, "energy_excess", return_value=1.0)
    def test_energy_violation(self, excess: MagicMock) -> None:
        """
        Test that a simulation with logged energy violations gives exit
        status 2 and a failed manifest that keeps the run results.
        """

        config = parse_config('scheme.steps = 2\noutput.audit = "on"\n')
        with TemporaryDirectory() as directory:
            with self.assertLogs(NAME, level="WARNING") as logs:
                status = dispatch(config, Path(directory))
            self.assertTrue((Path(directory) / "energy.csv").exists())
            manifest = read_manifest(directory)

        self.assertEqual(excess.call_count, 2)
        self.assertEqual(status, EXIT_VERIFICATION)
        self.assertTrue(
            any("Verification failed" in line for line in logs.output)
        )
        result = manifest["result"]
        self.assertEqual(result["status"], "failed")
        self.assertEqual(result["steps"], 2)
        self.assertEqual(result["violations"], 2)
        self.assertIn("steps 1, 2", result["failure"])

    @patch("dlmfd.command.run.run_simulation")
    def test_error(self, simulation: MagicMock) -> None:
        """
        Test that other errors propagate without a manifest.
        """

        simulation.side_effect = RuntimeError("Singular system")
        with TemporaryDirectory() as directory:
            with self.assertRaises(RuntimeError):
                _ = dispatch(default_config(), Path(directory))
            self.assertFalse((Path(directory) / MANIFEST_NAME).exists())

    def test_mms_convergence(self) -> None:
        """
        Test the convergence study writing error and rate tables.
        """

        config = parse_config(
            'run.mode = "mms-convergence"\nstudy.base = 2\n'
            + "study.fix_solid = true\n"
        )
        with TemporaryDirectory() as directory:
            status = dispatch(config, Path(directory), levels=3)
            lines = (
                (Path(directory) / "convergence.csv")
                .read_text(encoding="utf-8")
                .splitlines()
            )
            self.assertTrue((Path(directory) / "slopes.csv").exists())
            manifest = read_manifest(directory)

        self.assertEqual(status, EXIT_SUCCESS)
        self.assertEqual(len(lines), 4)
        result = manifest["result"]
        self.assertIn("combined", result["slope"])

    def test_infsup_scan(self) -> None:
        """
        Test the inf-sup scan writing the table of estimates.
        """

        config = parse_config(
            'run.mode = "infsup-scan"\nstudy.levels = 2\n'
            + "study.ratios = [1.0]\ntolerance.infsup = 100.0\n"
        )
        with TemporaryDirectory() as directory:
            status = dispatch(config, Path(directory), ratios=[0.5, 1.0])
            lines = (
                (Path(directory) / "infsup.csv")
                .read_text(encoding="utf-8")
                .splitlines()
            )
            manifest = read_manifest(directory)

        self.assertEqual(status, EXIT_SUCCESS)
        self.assertEqual(
            lines[0], "level,h_x,h_s,ratio,measured,beta_h,variant,codim"
        )
        self.assertEqual(len(lines), 5)
        result = manifest["result"]
        self.assertGreaterEqual(result["beta_min"], 1.0 - 1e-8)


@final
class RunCommandTest(SettingsTestCase):
    """
    Tests for the solver subcommands.
    """

    @override
    def tearDown(self) -> None:
        super().tearDown()
        logging.getLogger(NAME).setLevel(logging.NOTSET)

    def test_solve_static(self) -> None:
        """
        Test running the stationary solve from the command line.
        """

        with TemporaryDirectory() as directory:
            status = Base.start(
                "python", ["dlmfd", "solve-static", "-o", directory]
            )
            self.assertTrue((Path(directory) / MANIFEST_NAME).exists())
        self.assertEqual(status, EXIT_SUCCESS)

    def test_invalid_config(self) -> None:
        """
        Test that invalid or missing configuration files give exit status 1.
        """

        with TemporaryDirectory() as directory:
            with self.assertLogs("dlmfd.command", level="ERROR") as logs:
                status = Base.start(
                    "python",
                    [
                        "dlmfd",
                        "simulate",
                        "-c",
                        "samples/invalid-config/negative-dt.toml",
                        "-o",
                        directory,
                    ],
                )
            self.assertEqual(status, EXIT_ERROR)
            self.assertIn("scheme.dt", logs.output[0])

            with self.assertLogs("dlmfd.command", level="ERROR"):
                status = Base.start(
                    "python",
                    [
                        "dlmfd",
                        "simulate",
                        "-c",
                        "missing.toml",
                        "-o",
                        directory,
                    ],
                )
            self.assertEqual(status, EXIT_ERROR)

    def test_parse_ratios(self) -> None:
        """
        Test parsing comma-separated mesh size ratios.
        """

        self.assertEqual(parse_ratios("0.5, 1,2"), [0.5, 1.0, 2.0])
        with self.assertRaises(ValueError):
            _ = parse_ratios(" , ")
        with self.assertRaises(ValueError):
            _ = parse_ratios("a")
