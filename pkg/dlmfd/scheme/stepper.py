"""
Semi-implicit time stepping of the coupled problem.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse.linalg import splu

from ..assembly.base import CouplingConfig, ModelParams, SparseMatrix, Variant
from ..assembly.coupling import assemble_coupling
from ..assembly.fluid import assemble_viscous
from ..assembly.forms import assemble_mass, assemble_stiffness
from ..fem.space import FEFunction
from ..mesh.base import FloatArray
from ..mesh.solid import deformation_measures
from ..saddle.blocks import Spaces, assemble_blocks
from ..saddle.system import (
    RESIDUAL_TOLERANCE,
    BlockOperator,
    SaddleRHS,
    SaddleSolution,
    build_system,
    solve,
)
from .state import EnergyBreakdown, SimState

LOGGER = logging.getLogger(__name__)

# Fraction of the initial minimal deformation measure that triggers warnings
INVERTIBILITY_THRESHOLD = 1e-3


@dataclass(frozen=True)
class StepOptions:
    """
    Discretization choices of the time stepping scheme.
    """

    variant: Variant = "L2"
    quad_degree: int = 5
    convection: bool = False
    workers: int = 1
    tolerance: float = RESIDUAL_TOLERANCE


def _solve_projection(
    solid_coupling: SparseMatrix, rhs: FloatArray
) -> FloatArray:
    return splu(solid_coupling.tocsc()).solve(rhs)


def init_first_step(
    u0: FEFunction,
    x0: FEFunction,
    dt: float,
    variant: Variant = "L2",
    quad_degree: int = 5,
    workers: int = 1,
) -> FEFunction:
    """
    Compute the solid map after the first time step from the initial fluid
    velocity `u0` and solid map `x0`, such that the discrete solid velocity
    `(X^1 - X^0) / dt` is the projection of `u0` composed with `X^0` onto
    the solid space with respect to the coupling form.
    """

    codim = getattr(x0.space.mesh, "codim", 0)
    config = CouplingConfig(variant, codim, x0, quad_degree)
    fluid_coupling, solid_coupling = assemble_coupling(
        u0.space, x0.space, x0.space, config, workers
    )
    velocity = _solve_projection(
        solid_coupling, fluid_coupling @ u0.coefficients
    )
    return FEFunction(x0.space, x0.coefficients + dt * velocity)


class Stepper:
    """
    Time stepping scheme with the solid position lagged in the coupling and
    the convection term, and implicit viscous, elastic and constraint terms.
    """

    def __init__(
        self, spaces: Spaces, params: ModelParams, options: StepOptions
    ) -> None:
        self.spaces: Spaces = spaces
        self.params: ModelParams = params
        self.options: StepOptions = options
        self._initial_measure: float | None = None

    @property
    def codim(self) -> int:
        """
        Retrieve the codimension of the solid.
        """

        return getattr(self.spaces.solid.mesh, "codim", 0)

    @cached_property
    def fluid_mass(self) -> SparseMatrix:
        """
        Retrieve the mass matrix of the velocity space.
        """

        return assemble_mass(self.spaces.velocity, workers=self.options.workers)

    @cached_property
    def solid_mass(self) -> SparseMatrix:
        """
        Retrieve the mass matrix of the solid space.
        """

        return assemble_mass(self.spaces.solid, workers=self.options.workers)

    @cached_property
    def solid_stiffness(self) -> SparseMatrix:
        """
        Retrieve the stiffness matrix of the solid space.
        """

        return assemble_stiffness(
            self.spaces.solid, workers=self.options.workers
        )

    @cached_property
    def viscous(self) -> SparseMatrix:
        """
        Retrieve the matrix of the viscous form of the velocity space.
        """

        return assemble_viscous(
            self.spaces.velocity, self.params.nu, self.options.workers
        )

    def coupling(self, xbar: FEFunction) -> CouplingConfig:
        """
        Create the coupling configuration at the solid map `xbar`.
        """

        return CouplingConfig(
            self.options.variant, self.codim, xbar, self.options.quad_degree
        )

    def initial_state(self, u0: FEFunction, x0: FEFunction) -> SimState:
        """
        Create the state at time zero. The previous solid map is chosen such
        that the discrete solid velocity of the state equals the velocity of
        the first step from `init_first_step`.
        """

        x1 = init_first_step(
            u0,
            x0,
            self.params.dt,
            self.options.variant,
            self.options.quad_degree,
            self.options.workers,
        )
        x_prev = FEFunction(
            x0.space, 2.0 * x0.coefficients - x1.coefficients
        )
        self._initial_measure = self._min_measure(x0)
        return SimState(
            u=u0,
            p=self.spaces.pressure.zero(),
            x=x0,
            x_prev=x_prev,
            lam=self.spaces.multiplier.zero(),
            t=0.0,
            n=0,
        )

    def _min_measure(self, x: FEFunction) -> float:
        measures = deformation_measures(self.spaces.solid.mesh, x.nodal_values)
        return float(np.abs(measures).min())

    def system(self, state: SimState) -> tuple[BlockOperator, SaddleRHS]:
        """
        Assemble the stationary problem of the step after a state, with the
        coupling at the current solid map and the unknown solid map scaled
        by the inverse time step.
        """

        params = self.params
        dt = params.dt
        config = self.coupling(state.x)
        convection = state.u if self.options.convection else None
        blocks = assemble_blocks(
            self.spaces, params, config, convection, self.options.workers
        )
        history = 2.0 * state.x.coefficients - state.x_prev.coefficients
        rhs = SaddleRHS(
            u=params.alpha * (self.fluid_mass @ state.u.coefficients),
            x=params.delta_rho / dt**2 * (self.solid_mass @ history),
            lam=blocks.solid_coupling @ (-state.x.coefficients / dt),
        )
        return build_system(blocks), rhs

    def step(self, state: SimState) -> SimState:
        """
        Advance the state by one time step.
        """

        return self.advance(state)[0]

    def advance(self, state: SimState) -> tuple[SimState, SaddleSolution]:
        """
        Advance the state by one time step and also return the solution of
        the stationary problem, whose solid map is the next solid map
        divided by the time step.
        """

        dt = self.params.dt
        system, rhs = self.system(state)
        solution = solve(system, rhs, self.options.tolerance)
        x_next = FEFunction(self.spaces.solid, dt * solution.x.coefficients)
        self.monitor(x_next, state.n + 1)
        following = SimState(
            u=solution.u,
            p=solution.p,
            x=x_next,
            x_prev=state.x,
            lam=solution.lam,
            t=state.t + dt,
            n=state.n + 1,
        )
        return following, solution

    def monitor(self, x: FEFunction, n: int) -> None:
        """
        Log a warning when the solid map `x` of step `n` is close to losing
        invertibility compared to the initial solid map.
        """

        if self._initial_measure is None or self._initial_measure <= 0.0:
            return
        measure = self._min_measure(x)
        threshold = INVERTIBILITY_THRESHOLD * self._initial_measure
        if measure < threshold:
            LOGGER.warning(
                "Solid map close to losing invertibility at step %d: "
                + "minimal deformation measure %.3e below %.3e",
                n,
                measure,
                threshold,
            )

    def energy(self, state: SimState) -> EnergyBreakdown:
        """
        Compute the energy components of a state with the same matrices as
        the assembly of the scheme.
        """

        params = self.params
        u = state.u.coefficients
        x = state.x.coefficients
        velocity = (x - state.x_prev.coefficients) / params.dt
        return EnergyBreakdown(
            kinetic=0.5 * params.rho_f * float(u @ (self.fluid_mass @ u)),
            solid_kinetic=0.5
            * params.delta_rho
            * float(velocity @ (self.solid_mass @ velocity)),
            elastic=0.5
            * params.kappa
            * float(x @ (self.solid_stiffness @ x)),
            dissipation=(
                params.dt * float(u @ (self.viscous @ u))
                if state.n > 0
                else 0.0
            ),
        )


def step(
    state: SimState,
    params: ModelParams,
    options: StepOptions,
    spaces: Spaces,
) -> SimState:
    """
    Advance a state by one time step with a new stepper.
    """

    return Stepper(spaces, params, options).step(state)


def energy(
    state: SimState, params: ModelParams, spaces: Spaces
) -> EnergyBreakdown:
    """
    Compute the energy components of a state.
    """

    return Stepper(spaces, params, StepOptions()).energy(state)
