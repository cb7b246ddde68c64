"""
Load vectors of the stationary problem.
"""

import numpy as np

from ..fem.quadrature import composite_quadrature, quadrature
from ..fem.space import FESpace, Field
from ..mesh.base import FloatArray
from .base import CouplingConfig, default_degree
from .forms import assemble_h1_gram


def assemble_load(
    space: FESpace,
    field: Field | None,
    degree: int | None = None,
    subdivisions: int = 1,
) -> FloatArray:
    """
    Assemble the load vector `(field, v)` of a space. The field is called
    with an array of points and returns one row of components per point.
    Composite quadrature with `subdivisions` parts per cell edge improves
    the integration of fields that are discontinuous within cells.
    """

    if field is None:
        return np.zeros(space.n_dofs)
    rule = composite_quadrature(
        default_degree(space) if degree is None else degree,
        space.mesh.cell_kind,
        subdivisions,
    )
    tab = space.tabulate(rule)
    n_cells, n_points = tab.weights.shape
    values = np.asarray(
        field(tab.points.reshape(-1, 2)), dtype=float
    ).reshape(n_cells, n_points, space.n_components)
    local = np.einsum("kq,qi,kqc->kci", tab.weights, tab.values, values)
    return np.bincount(
        space.dof_map.ravel(),
        weights=local.reshape(n_cells, -1).ravel(),
        minlength=space.n_dofs,
    )


def assemble_loads(
    velocity: FESpace,
    solid: FESpace,
    multiplier: FESpace,
    f: Field | None,
    g: Field | None,
    d: Field | None,
    config: CouplingConfig,
    subdivisions: int = 1,
) -> tuple[FloatArray, FloatArray, FloatArray]:
    """
    Assemble the right-hand sides `(f, v)`, `(g, Y)` and `c(mu, d)`.

    The fluid load is integrated with a rule two degrees above the default,
    optionally on subdivided cells. The constraint load uses the coupling
    quadrature for the L2 variant; the H1 variant applies the coupling Gram
    matrix to the nodal interpolant of `d`. A missing field gives a zero
    vector.
    """

    rhs_u = assemble_load(
        velocity, f, default_degree(velocity) + 2, subdivisions
    )
    rhs_x = assemble_load(solid, g, config.quad_degree)
    if d is None:
        rhs_lambda = np.zeros(multiplier.n_dofs)
    elif config.variant == "H1":
        gram = assemble_h1_gram(multiplier, config.quad_degree)
        rhs_lambda = gram @ multiplier.interpolate(d).coefficients
    else:
        rhs_lambda = assemble_load(multiplier, d, config.quad_degree)
    return rhs_u, rhs_x, np.asarray(rhs_lambda, dtype=float)


def assemble_gradient_load(
    space: FESpace, field: Field, degree: int | None = None
) -> FloatArray:
    """
    Assemble the load vector `(G, grad v)` of a space for a tensor field `G`,
    which returns one matrix indexed by component and direction per point.
    """

    rule = quadrature(
        default_degree(space) if degree is None else degree,
        space.mesh.cell_kind,
    )
    tab = space.tabulate(rule)
    n_cells, n_points = tab.weights.shape
    dim = tab.gradients.shape[-1]
    values = np.asarray(
        field(tab.points.reshape(-1, 2)), dtype=float
    ).reshape(n_cells, n_points, space.n_components, dim)
    local = np.einsum("kq,kqid,kqcd->kci", tab.weights, tab.gradients, values)
    return np.bincount(
        space.dof_map.ravel(),
        weights=local.reshape(n_cells, -1).ravel(),
        minlength=space.n_dofs,
    )
