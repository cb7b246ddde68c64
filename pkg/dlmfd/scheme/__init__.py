"""
Semi-implicit time stepping with the energy audit.
"""

from .run import (
    Simulation,
    StaticResult,
    Trajectory,
    dump_state,
    energy_excess,
    run,
    solve_static,
)
from .setup import (
    build_fluid,
    build_solid,
    initial_map,
    initial_velocity,
    model_params,
    step_options,
)
from .state import EnergyBreakdown, SimState
from .stepper import StepOptions, Stepper, energy, init_first_step, step

__all__ = [
    "Simulation",
    "StaticResult",
    "Trajectory",
    "dump_state",
    "energy_excess",
    "run",
    "solve_static",
    "build_fluid",
    "build_solid",
    "initial_map",
    "initial_velocity",
    "model_params",
    "step_options",
    "EnergyBreakdown",
    "SimState",
    "StepOptions",
    "Stepper",
    "energy",
    "init_first_step",
    "step",
]
