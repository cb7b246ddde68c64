"""
Discrete spaces and block assembly of the stationary problem.
"""

from typing import NamedTuple

import scipy.sparse as sp

from ..assembly.base import CouplingConfig, ModelParams
from ..assembly.coupling import assemble_coupling
from ..assembly.fluid import (
    assemble_convection,
    assemble_divergence,
    assemble_fluid_operator,
)
from ..assembly.solid import assemble_solid_operator
from ..fem.space import FEFunction, FESpace, build_space
from ..mesh.fluid import FluidMesh
from ..mesh.solid import SolidMesh
from .system import SystemBlocks


class Spaces(NamedTuple):
    """
    Taylor-Hood velocity and pressure spaces on the fluid mesh and linear
    solid and multiplier spaces on the solid mesh.
    """

    velocity: FESpace
    pressure: FESpace
    solid: FESpace
    multiplier: FESpace


def build_spaces(fluid: FluidMesh, solid: SolidMesh) -> Spaces:
    """
    Build the four discrete spaces of the coupled problem.
    """

    return Spaces(
        velocity=build_space(fluid, "P2", 2),
        pressure=build_space(fluid, "P1", 1),
        solid=build_space(solid, "P1", 2),
        multiplier=build_space(solid, "P1", 2),
    )


def assemble_blocks(
    spaces: Spaces,
    params: ModelParams,
    config: CouplingConfig | None,
    convection: FEFunction | None = None,
    workers: int = 1,
) -> SystemBlocks:
    """
    Assemble all blocks of the stationary problem. Without a coupling
    configuration the fluid and solid are decoupled. An advecting velocity
    adds the lagged convection matrix to the fluid operator.
    """

    velocity, pressure, solid, multiplier = spaces
    fluid = assemble_fluid_operator(velocity, params, workers=workers)
    if convection is not None:
        fluid = fluid + assemble_convection(
            velocity, convection, params.rho_f, workers
        )
    if config is None:
        fluid_coupling = sp.csr_matrix((0, velocity.n_dofs))
        solid_coupling = sp.csr_matrix((0, solid.n_dofs))
    else:
        fluid_coupling, solid_coupling = assemble_coupling(
            velocity, solid, multiplier, config, workers
        )
    return SystemBlocks(
        velocity=velocity,
        pressure=pressure,
        solid=solid,
        multiplier=multiplier,
        fluid=sp.csr_matrix(fluid),
        divergence=assemble_divergence(velocity, pressure, workers),
        solid_operator=assemble_solid_operator(
            solid, params, workers=workers
        ),
        fluid_coupling=fluid_coupling,
        solid_coupling=solid_coupling,
    )
