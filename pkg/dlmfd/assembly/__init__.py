"""
Assembly of the bilinear forms and loads of the coupled problem.
"""

from .base import (
    CouplingConfig,
    ModelParams,
    SparseMatrix,
    element_loop,
)
from .coupling import (
    assemble_coupling,
    assemble_coupling_load,
    map_quadrature_points,
)
from .fluid import (
    assemble_convection,
    assemble_divergence,
    assemble_fluid_operator,
    assemble_viscous,
)
from .forms import (
    assemble_h1_gram,
    assemble_integrals,
    assemble_mass,
    assemble_stiffness,
)
from .loads import assemble_gradient_load, assemble_load, assemble_loads
from .solid import assemble_solid_operator

__all__ = [
    "CouplingConfig",
    "ModelParams",
    "SparseMatrix",
    "element_loop",
    "assemble_coupling",
    "assemble_coupling_load",
    "map_quadrature_points",
    "assemble_convection",
    "assemble_divergence",
    "assemble_fluid_operator",
    "assemble_viscous",
    "assemble_h1_gram",
    "assemble_integrals",
    "assemble_mass",
    "assemble_stiffness",
    "assemble_gradient_load",
    "assemble_load",
    "assemble_loads",
    "assemble_solid_operator",
]
