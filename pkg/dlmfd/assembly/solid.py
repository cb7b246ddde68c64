"""
Solid operator of the linear elastic structure.
"""

from ..fem.space import FESpace
from .base import ModelParams, SparseMatrix
from .forms import assemble_weighted


def assemble_solid_operator(
    space: FESpace,
    params: ModelParams,
    *,
    mass_only: bool = False,
    workers: int = 1,
) -> SparseMatrix:
    """
    Assemble `beta * (X, Y) + gamma * (grad X, grad Y)` over the reference
    domain of the solid. Gradients of thin solids are derivatives with
    respect to the reference arclength. With `mass_only` the elastic part is
    left out.
    """

    if space.n_components != 2:
        raise ValueError("Solid maps must have two components")
    stiffness = 0.0 if mass_only else params.gamma
    return assemble_weighted(
        space, params.beta, stiffness, workers=workers
    )
