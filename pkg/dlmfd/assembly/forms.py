"""
Mass, stiffness and Gram matrices of finite element spaces.
"""

import numpy as np

from ..fem.quadrature import quadrature
from ..fem.space import FESpace, Tabulation
from ..mesh.base import FloatArray, IntArray
from .base import (
    SparseMatrix,
    Triplets,
    default_degree,
    element_loop,
    local_triplets,
    vector_block,
)


def _tabulate(space: FESpace, degree: int | None) -> Tabulation:
    rule = quadrature(
        default_degree(space) if degree is None else degree,
        space.mesh.cell_kind,
    )
    return space.tabulate(rule)


def local_mass(tab: Tabulation, cells: IntArray) -> FloatArray:
    """
    Compute scalar local mass matrices of the given cells.
    """

    return np.einsum(
        "kq,qi,qj->kij", tab.weights[cells], tab.values, tab.values
    )


def local_stiffness(tab: Tabulation, cells: IntArray) -> FloatArray:
    """
    Compute scalar local stiffness matrices, the integrals of the products
    of basis gradients, of the given cells.
    """

    gradients = tab.gradients[cells]
    return np.einsum(
        "kq,kqic,kqjc->kij", tab.weights[cells], gradients, gradients
    )


def assemble_weighted(
    space: FESpace,
    mass: float,
    stiffness: float,
    degree: int | None = None,
    workers: int = 1,
) -> SparseMatrix:
    """
    Assemble the matrix of `mass * (u, v) + stiffness * (grad u, grad v)`
    with the components of vector spaces uncoupled.
    """

    tab = _tabulate(space, degree)

    def kernel(cells: IntArray) -> Triplets:
        local = np.zeros((len(cells),) + (space.element.n_local,) * 2)
        if mass != 0.0:
            local += mass * local_mass(tab, cells)
        if stiffness != 0.0:
            local += stiffness * local_stiffness(tab, cells)
        dofs = space.dof_map[cells]
        return local_triplets(
            dofs, dofs, vector_block(local, space.n_components)
        )

    return element_loop(
        kernel, space.mesh.n_cells, (space.n_dofs, space.n_dofs), workers
    )


def assemble_mass(
    space: FESpace, degree: int | None = None, workers: int = 1
) -> SparseMatrix:
    """
    Assemble the mass matrix of a space.
    """

    return assemble_weighted(space, 1.0, 0.0, degree, workers)


def assemble_stiffness(
    space: FESpace, degree: int | None = None, workers: int = 1
) -> SparseMatrix:
    """
    Assemble the matrix of the integrals of products of basis gradients.
    """

    return assemble_weighted(space, 0.0, 1.0, degree, workers)


def assemble_h1_gram(
    space: FESpace, degree: int | None = None, workers: int = 1
) -> SparseMatrix:
    """
    Assemble the Gram matrix of the full H1 scalar product of a space.
    """

    return assemble_weighted(space, 1.0, 1.0, degree, workers)


def assemble_integrals(space: FESpace, degree: int | None = None) -> FloatArray:
    """
    Compute the integral of every basis function of a scalar space.
    """

    if space.n_components != 1:
        raise ValueError("Basis integrals require a scalar space")
    tab = _tabulate(space, degree)
    local = np.einsum("kq,qi->ki", tab.weights, tab.values)
    return np.bincount(
        space.dof_map.ravel(), weights=local.ravel(), minlength=space.n_dofs
    )
