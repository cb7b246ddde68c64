"""
Finite element spaces and discrete functions.
"""

from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from ..mesh.base import FloatArray, IntArray, TriangleMesh
from ..mesh.fluid import FluidMesh
from ..mesh.solid import ThinSolidMesh
from .element import Element, get_element
from .quadrature import QuadratureRule

Mesh = TriangleMesh | ThinSolidMesh
Field = Callable[[FloatArray], FloatArray]


class Tabulation(NamedTuple):
    """
    Basis functions of a space tabulated at the quadrature points of every
    cell.
    """

    # Basis values per quadrature point and basis function
    values: FloatArray
    # Physical gradients per cell, quadrature point, basis function, direction
    gradients: FloatArray
    # Physical quadrature points per cell and quadrature point
    points: FloatArray
    # Quadrature weights including the cell measure
    weights: FloatArray


class FESpace:
    """
    Lagrange finite element space of scalar or vector fields on a mesh.

    Scalar degrees of freedom are numbered with vertices first, followed by
    edges in the order of the mesh edges for quadratic elements. Components
    of vector fields are blocked, so component `c` of scalar degree of
    freedom `k` has global index `c * n_scalar + k`.
    """

    def __init__(self, mesh: Mesh, family: str, n_components: int) -> None:
        if n_components not in (1, 2):
            raise ValueError(f"Unsupported component count {n_components}")
        self.mesh: Mesh = mesh
        self.family: str = family
        self.n_components: int = n_components
        self.element: Element = get_element(family, mesh.cell_kind)

    @cached_property
    def cell_dofs(self) -> IntArray:
        """
        Retrieve the scalar degrees of freedom of every cell in the order of
        the local basis functions.
        """

        if self.element.degree == 1:
            return self.mesh.cells
        if not isinstance(self.mesh, TriangleMesh):
            raise ValueError("Edge degrees of freedom require triangles")
        return np.hstack(
            (self.mesh.cells, self.mesh.n_vertices + self.mesh.cell_edges)
        )

    @property
    def n_scalar(self) -> int:
        """
        Retrieve the number of scalar degrees of freedom per component.
        """

        if self.element.degree == 1 or not isinstance(self.mesh, TriangleMesh):
            return self.mesh.n_vertices
        return self.mesh.n_vertices + self.mesh.n_edges

    @property
    def n_dofs(self) -> int:
        """
        Retrieve the total number of degrees of freedom.
        """

        return self.n_components * self.n_scalar

    @cached_property
    def dof_map(self) -> IntArray:
        """
        Retrieve the global degrees of freedom of every cell, ordered by
        component and then by local basis function.
        """

        return np.hstack(
            [
                c * self.n_scalar + self.cell_dofs
                for c in range(self.n_components)
            ]
        )

    @cached_property
    def node_coordinates(self) -> FloatArray:
        """
        Retrieve the coordinates of the nodes of the scalar degrees of freedom.
        """

        vertices = self.mesh.vertices
        if self.n_scalar == self.mesh.n_vertices:
            return vertices
        if not isinstance(self.mesh, TriangleMesh):
            raise TypeError("Edge nodes require a triangle mesh")
        edges = self.mesh.edges
        midpoints = 0.5 * (vertices[edges[:, 0]] + vertices[edges[:, 1]])
        return np.vstack((vertices, midpoints))

    @cached_property
    def boundary_dofs(self) -> IntArray:
        """
        Retrieve the sorted degrees of freedom of all components whose nodes
        lie on the boundary of a triangulated domain.
        """

        if not isinstance(self.mesh, TriangleMesh):
            return np.zeros(0, dtype=np.int64)
        scalar = self.mesh.boundary_vertices
        if self.n_scalar > self.mesh.n_vertices:
            edges = self.mesh.n_vertices + self.mesh.boundary_edge_indices
            scalar = np.concatenate((scalar, edges))
        return np.sort(
            np.concatenate(
                [c * self.n_scalar + scalar for c in range(self.n_components)]
            )
        )

    @cached_property
    def free_dofs(self) -> IntArray:
        """
        Retrieve the degrees of freedom which are not on the boundary.
        """

        mask = np.ones(self.n_dofs, dtype=bool)
        mask[self.boundary_dofs] = False
        return np.flatnonzero(mask)

    def physical_gradients(
        self, cells: IntArray, ref_gradients: FloatArray
    ) -> FloatArray:
        """
        Transform reference gradients of basis functions, given per point in
        the listed cells, into physical gradients. For segment meshes, the
        gradient is the derivative with respect to the reference arclength.
        """

        if isinstance(self.mesh, ThinSolidMesh):
            return ref_gradients / self.mesh.lengths[cells, None, None]
        inverse = self.mesh.inverse_jacobians[cells]
        return np.einsum("npb,nba->npa", ref_gradients, inverse)

    def tabulate(self, rule: QuadratureRule) -> Tabulation:
        """
        Tabulate basis functions, physical gradients, quadrature points and
        weights on every cell of the mesh.
        """

        n_cells = self.mesh.n_cells
        n_points = len(rule)
        values = self.element.values(rule.points)
        ref = self.element.gradients(rule.points)
        cells = np.repeat(np.arange(n_cells), n_points)
        gradients = self.physical_gradients(
            cells, np.tile(ref, (n_cells, 1, 1))
        ).reshape(n_cells, n_points, self.element.n_local, -1)
        points = self.mesh.map_points(
            cells, np.tile(rule.points, (n_cells, 1))
        ).reshape(n_cells, n_points, 2)
        reference = 0.5 if rule.cell_kind == "triangle" else 1.0
        scale = self.mesh.measures / reference
        weights = scale[:, None] * rule.weights[None, :]
        return Tabulation(values, gradients, points, weights)

    def interpolate(self, field: Field) -> "FEFunction":
        """
        Create the nodal interpolant of a field, which is called with an array
        of node coordinates and returns one value per node for scalar spaces
        or one row of components per node for vector spaces.
        """

        nodal = np.asarray(field(self.node_coordinates), dtype=float)
        nodal = nodal.reshape(self.n_scalar, self.n_components)
        return FEFunction(self, nodal.T.reshape(-1).copy())

    def zero(self) -> "FEFunction":
        """
        Create the zero function of the space.
        """

        return FEFunction(self, np.zeros(self.n_dofs))


def build_space(mesh: Mesh, family: str, n_components: int) -> FESpace:
    """
    Build a finite element space of `family` with `n_components` on `mesh`.
    """

    return FESpace(mesh, family, n_components)


def eval_basis(
    space: FESpace, cell: int, ref_point: FloatArray
) -> tuple[FloatArray, FloatArray]:
    """
    Evaluate the scalar basis functions of a cell at a reference point.
    Returns the values and the reference gradients of the local basis
    functions, which are shared by all affine cells of the mesh.
    """

    if not 0 <= cell < space.mesh.n_cells:
        raise IndexError(f"Cell {cell} is not in the mesh")
    point = np.asarray(ref_point, dtype=float).reshape(1, -1)
    return space.element.values(point)[0], space.element.gradients(point)[0]


def interpolate(space: FESpace, field: Field) -> "FEFunction":
    """
    Create the nodal interpolant of a field in a space.
    """

    return space.interpolate(field)


@dataclass(eq=False)
class FEFunction:
    """
    Discrete function given by its coefficients in a finite element space.
    """

    space: FESpace
    coefficients: FloatArray

    def __post_init__(self) -> None:
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (self.space.n_dofs,):
            raise ValueError(
                f"Expected {self.space.n_dofs} coefficients, "
                + f"got shape {self.coefficients.shape}"
            )

    @property
    def nodal_values(self) -> FloatArray:
        """
        Retrieve the coefficients as one row of components per node.
        """

        space = self.space
        return self.coefficients.reshape(space.n_components, space.n_scalar).T

    def evaluate(self, cells: IntArray, ref_points: FloatArray) -> FloatArray:
        """
        Evaluate the function at reference points within the given cells, with
        one point per cell entry. Returns one row of components per point.
        """

        values = self.space.element.values(ref_points)
        local = self.nodal_values[self.space.cell_dofs[cells]]
        return np.einsum("np,npc->nc", values, local)

    def gradient(self, cells: IntArray, ref_points: FloatArray) -> FloatArray:
        """
        Evaluate the physical gradient at reference points within the given
        cells. Returns gradients indexed by point, component and direction.
        """

        ref = self.space.element.gradients(ref_points)
        grads = self.space.physical_gradients(cells, ref)
        local = self.nodal_values[self.space.cell_dofs[cells]]
        return np.einsum("npa,npc->nca", grads, local)

    def at(self, points: FloatArray) -> FloatArray:
        """
        Evaluate the function at physical points of a fluid mesh.
        """

        mesh = self.space.mesh
        if not isinstance(mesh, FluidMesh):
            raise TypeError("Point evaluation requires a fluid mesh")
        cells, bary = mesh.locate_points(points)
        return self.evaluate(cells, bary[:, 1:])
