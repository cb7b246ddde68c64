"""
Coupling matrices between the fluid velocity, the solid map and the
Lagrange multiplier.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from ..fem.quadrature import quadrature
from ..fem.space import FESpace, Field
from ..mesh.base import FloatArray, IntArray, PointOutsideDomain
from ..mesh.fluid import FluidMesh
from .base import (
    CouplingConfig,
    SparseMatrix,
    Triplets,
    element_loop,
    local_triplets,
)
from .forms import assemble_h1_gram, assemble_mass

LOGGER = logging.getLogger(__name__)


class CouplingPoints(NamedTuple):
    """
    Solid quadrature points mapped into the fluid mesh.
    """

    # Mapped points per solid cell and quadrature point
    points: FloatArray
    # Fluid cell and barycentric coordinates of each mapped point
    fluid_cells: IntArray
    fluid_coords: FloatArray


def map_quadrature_points(
    velocity: FESpace, config: CouplingConfig
) -> CouplingPoints:
    """
    Map the coupling quadrature points of the solid through the solid map
    and locate them in the fluid mesh.

    Raises `PointOutsideDomain` with the solid cell and quadrature point
    index of the first mapped point outside the fluid domain.
    """

    mesh = velocity.mesh
    if not isinstance(mesh, FluidMesh):
        raise TypeError("Velocity space must live on a fluid mesh")
    solid = config.xbar.space.mesh
    rule = quadrature(config.quad_degree, solid.cell_kind)
    n_points = len(rule)
    cells = np.repeat(np.arange(solid.n_cells), n_points)
    ref = np.tile(rule.points, (solid.n_cells, 1))
    points = config.xbar.evaluate(cells, ref)
    try:
        fluid_cells, coords = mesh.locate_points(points)
    except PointOutsideDomain as error:
        index = int(
            np.flatnonzero(np.all(points == error.point, axis=1))[0]
        )
        raise PointOutsideDomain(
            error.point, index // n_points, index % n_points
        ) from error
    return CouplingPoints(
        points.reshape(solid.n_cells, n_points, 2), fluid_cells, coords
    )


def assemble_coupling(
    velocity: FESpace,
    solid: FESpace,
    multiplier: FESpace,
    config: CouplingConfig,
    workers: int = 1,
) -> tuple[SparseMatrix, SparseMatrix]:
    """
    Assemble the coupling matrices `C_f` with entries `c(mu_i, phi_j o Xbar)`
    and `C_s` with entries `c(mu_i, Y_j)`.

    The L2 variant uses the scalar product on the reference domain, which is
    the duality pairing for thick solids and the trace pairing for thin
    solids. The H1 variant adds the scalar product of the gradients, where
    the gradient of a composed fluid function follows from the chain rule
    with the piecewise constant deformation gradient of the solid map.
    """

    if multiplier.mesh is not solid.mesh or multiplier.family != solid.family:
        raise ValueError("Multipliers must live in the solid space")
    if config.xbar.space.mesh is not solid.mesh:
        raise ValueError("Solid map must live on the solid mesh")

    rule = quadrature(config.quad_degree, solid.mesh.cell_kind)
    tab = multiplier.tabulate(rule)
    mapped = map_quadrature_points(velocity, config)
    n_points = len(rule)
    ref_fluid = mapped.fluid_coords[:, 1:]
    phi = velocity.element.values(ref_fluid)
    fluid_dofs = velocity.cell_dofs[mapped.fluid_cells]
    if config.variant == "H1":
        solid_cells = np.repeat(np.arange(solid.mesh.n_cells), n_points)
        deformation = config.xbar.gradient(
            solid_cells, np.tile(rule.points, (solid.mesh.n_cells, 1))
        )
        fluid_gradients = velocity.physical_gradients(
            mapped.fluid_cells, velocity.element.gradients(ref_fluid)
        )
        # Gradients of fluid basis functions composed with the solid map
        composed = np.einsum("nck,nic->nik", deformation, fluid_gradients)
    else:
        composed = np.zeros(0)

    n_multiplier = multiplier.element.n_local

    def kernel(cells: IntArray) -> Triplets:
        index = (cells[:, np.newaxis] * n_points + np.arange(n_points)).ravel()
        weights = tab.weights[cells].ravel()
        mu = np.tile(tab.values, (len(cells), 1))
        local = np.einsum("n,ni,nj->nij", weights, mu, phi[index])
        if config.variant == "H1":
            grad_mu = tab.gradients[cells].reshape(
                len(index), n_multiplier, -1
            )
            local += np.einsum(
                "n,nik,njk->nij", weights, grad_mu, composed[index]
            )
        rows = np.repeat(multiplier.cell_dofs[cells], n_points, axis=0)
        cols = fluid_dofs[index]
        return local_triplets(rows, cols, local)

    scalar = element_loop(
        kernel,
        solid.mesh.n_cells,
        (multiplier.n_scalar, velocity.n_scalar),
        workers,
    )
    fluid_block = sp.csr_matrix(sp.kron(sp.eye(2), scalar, format="csr"))

    if config.variant == "H1":
        solid_block = assemble_h1_gram(solid, config.quad_degree, workers)
    else:
        solid_block = assemble_mass(solid, config.quad_degree, workers)

    LOGGER.debug(
        "Coupling of %d mapped points with %d nonzeros",
        len(mapped.fluid_cells),
        fluid_block.nnz,
    )
    return fluid_block, solid_block


def assemble_coupling_load(
    velocity: FESpace, field: Field, config: CouplingConfig
) -> FloatArray:
    """
    Assemble the vector `(field, v o Xbar)` of the L2 coupling for a field
    on the solid reference domain, integrated with the coupling quadrature
    of the solid cells.
    """

    solid = config.xbar.space
    rule = quadrature(config.quad_degree, solid.mesh.cell_kind)
    tab = solid.tabulate(rule)
    mapped = map_quadrature_points(velocity, config)
    n_cells, n_points = tab.weights.shape
    values = np.asarray(
        field(tab.points.reshape(-1, 2)), dtype=float
    ).reshape(n_cells * n_points, velocity.n_components)
    phi = velocity.element.values(mapped.fluid_coords[:, 1:])
    local = np.einsum("n,nc,ni->nci", tab.weights.ravel(), values, phi)
    return np.bincount(
        velocity.dof_map[mapped.fluid_cells].ravel(),
        weights=local.reshape(len(phi), -1).ravel(),
        minlength=velocity.n_dofs,
    )
