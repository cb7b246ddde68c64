"""
Fluid operator, convection and divergence matrices.
"""

import logging

import numpy as np

from ..fem.quadrature import quadrature
from ..fem.space import FEFunction, FESpace, Tabulation
from ..mesh.base import FloatArray, IntArray
from .base import (
    ModelParams,
    SparseMatrix,
    Triplets,
    default_degree,
    element_loop,
    local_triplets,
    vector_block,
)
from .forms import local_mass, local_stiffness

LOGGER = logging.getLogger(__name__)


def _check_velocity(space: FESpace) -> None:
    if space.n_components != 2:
        raise ValueError("Velocity spaces must have two components")


def _local_symmetric_gradient(tab: Tabulation, cells: IntArray) -> FloatArray:
    # Integral of eps(phi_j e_b) : eps(phi_i e_a), ordered by (a, i), (b, j)
    weights = tab.weights[cells]
    gradients = tab.gradients[cells]
    n_cells = len(cells)
    n_local = gradients.shape[2]
    laplace = vector_block(local_stiffness(tab, cells), 2)
    cross = np.einsum("kq,kqib,kqja->kaibj", weights, gradients, gradients)
    return 0.5 * (laplace + cross.reshape(n_cells, 2 * n_local, 2 * n_local))


def assemble_fluid_operator(
    space: FESpace,
    params: ModelParams,
    *,
    mass_only: bool = False,
    workers: int = 1,
) -> SparseMatrix:
    """
    Assemble the fluid operator `alpha * (u, v) + (nu eps(u), eps(v))` on a
    velocity space, where `eps` is the symmetric gradient. With `mass_only`
    the viscous part is left out.
    """

    _check_velocity(space)
    tab = space.tabulate(quadrature(default_degree(space), "triangle"))

    def kernel(cells: IntArray) -> Triplets:
        local = params.alpha * vector_block(local_mass(tab, cells), 2)
        if not mass_only:
            local += params.nu * _local_symmetric_gradient(tab, cells)
        dofs = space.dof_map[cells]
        return local_triplets(dofs, dofs, local)

    matrix = element_loop(
        kernel, space.mesh.n_cells, (space.n_dofs, space.n_dofs), workers
    )
    LOGGER.debug("Fluid operator with %d nonzeros", matrix.nnz)
    return matrix


def assemble_viscous(
    space: FESpace, nu: float, workers: int = 1
) -> SparseMatrix:
    """
    Assemble the viscous form `(nu eps(u), eps(v))` on a velocity space.
    """

    _check_velocity(space)
    tab = space.tabulate(quadrature(default_degree(space), "triangle"))

    def kernel(cells: IntArray) -> Triplets:
        dofs = space.dof_map[cells]
        local = nu * _local_symmetric_gradient(tab, cells)
        return local_triplets(dofs, dofs, local)

    return element_loop(
        kernel, space.mesh.n_cells, (space.n_dofs, space.n_dofs), workers
    )


def assemble_convection(
    space: FESpace,
    w: FEFunction,
    rho_f: float = 1.0,
    workers: int = 1,
) -> SparseMatrix:
    """
    Assemble the skew-symmetric convection form
    `rho_f / 2 * ((w . grad u, v) - (w . grad v, u))` with the advecting
    velocity `w` lagged, so that rows belong to `v` and columns to `u`.
    """

    _check_velocity(space)
    if w.space is not space:
        raise ValueError("Advecting velocity must live in the velocity space")
    degree = 3 * space.element.degree - 1
    tab = space.tabulate(quadrature(degree, "triangle"))
    nodal = w.nodal_values

    def kernel(cells: IntArray) -> Triplets:
        advecting = np.einsum(
            "qi,kic->kqc", tab.values, nodal[space.cell_dofs[cells]]
        )
        transport = np.einsum(
            "kq,qi,kqc,kqjc->kij",
            tab.weights[cells],
            tab.values,
            advecting,
            tab.gradients[cells],
        )
        skew = 0.5 * rho_f * (transport - transport.transpose(0, 2, 1))
        dofs = space.dof_map[cells]
        return local_triplets(dofs, dofs, vector_block(skew, 2))

    return element_loop(
        kernel, space.mesh.n_cells, (space.n_dofs, space.n_dofs), workers
    )


def assemble_divergence(
    velocity: FESpace, pressure: FESpace, workers: int = 1
) -> SparseMatrix:
    """
    Assemble the divergence matrix with entries `(div phi_j, psi_q)` for
    pressure basis functions `psi_q` in the rows and velocity basis
    functions `phi_j` in the columns.
    """

    _check_velocity(velocity)
    if velocity.mesh is not pressure.mesh:
        raise ValueError("Velocity and pressure must share their mesh")
    rule = quadrature(default_degree(velocity), "triangle")
    tab = velocity.tabulate(rule)
    psi = pressure.element.values(rule.points)
    n_local = velocity.element.n_local

    def kernel(cells: IntArray) -> Triplets:
        local = np.einsum(
            "kq,qp,kqjb->kpbj", tab.weights[cells], psi, tab.gradients[cells]
        ).reshape(len(cells), psi.shape[1], 2 * n_local)
        return local_triplets(
            pressure.dof_map[cells], velocity.dof_map[cells], local
        )

    return element_loop(
        kernel,
        velocity.mesh.n_cells,
        (pressure.n_dofs, velocity.n_dofs),
        workers,
    )
