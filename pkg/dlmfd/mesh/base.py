"""
Shared triangulation geometry and mesh errors.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]
Bounds = tuple[float, float, float, float]

# Geometric tolerance factor, scaled by the mesh size of the fluid mesh
EPS_GEOM = 1e-12

# Local edges of a triangle as pairs of local vertex indices
LOCAL_EDGES: tuple[tuple[int, int], ...] = ((0, 1), (1, 2), (2, 0))


class InvalidGeometry(ValueError):
    """
    Error indicating that mesh construction parameters or coordinates do not
    describe a valid geometry.
    """


class PointOutsideDomain(ValueError):
    """
    Error indicating that a point does not lie inside the fluid domain.
    """

    def __init__(
        self,
        point: FloatArray,
        cell: int | None = None,
        quad: int | None = None,
    ) -> None:
        self.point: FloatArray = np.asarray(point, dtype=float)
        self.cell: int | None = cell
        self.quad: int | None = quad
        location = ""
        if cell is not None:
            location = f" (solid cell {cell}, quadrature point {quad})"
        super().__init__(
            f"Point {tuple(self.point.tolist())} lies outside of the fluid "
            + f"domain{location}"
        )


def signed_areas(vertices: FloatArray, cells: IntArray) -> FloatArray:
    """
    Compute signed areas of triangles, which are positive for triangles with
    counterclockwise vertex order.
    """

    a = vertices[cells[:, 0]]
    b = vertices[cells[:, 1]]
    c = vertices[cells[:, 2]]
    return 0.5 * (
        (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
        - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    )


def orient(vertices: FloatArray, cells: IntArray) -> IntArray:
    """
    Reorder the vertices of clockwise triangles so that all triangles are
    positively oriented.
    """

    cells = cells.copy()
    flip = signed_areas(vertices, cells) < 0
    cells[flip] = cells[flip][:, [0, 2, 1]]
    return cells


def triangle_edges(cells: IntArray) -> tuple[IntArray, IntArray, IntArray]:
    """
    Determine the unique edges of a triangulation.

    Returns the edges as sorted vertex index pairs numbered in order of first
    occurrence when walking cells and their local edges, the edge indices of
    each local edge of every cell, and the number of cells sharing each edge.
    """

    local = np.array(LOCAL_EDGES)
    pairs = np.sort(cells[:, local].reshape(-1, 2), axis=1)
    _, first, inverse, counts = np.unique(
        pairs,
        axis=0,
        return_index=True,
        return_inverse=True,
        return_counts=True,
    )
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    edges = pairs[first[order]]
    cell_edges = rank[inverse.reshape(-1)].reshape(-1, 3)
    return edges, cell_edges, counts[order]


def max_diameter(vertices: FloatArray, cells: IntArray) -> FloatArray:
    """
    Compute the diameter of each cell, which is its longest edge for triangles
    and segments.
    """

    n_local = cells.shape[1]
    diameters = np.zeros(len(cells))
    for i in range(n_local):
        for j in range(i + 1, n_local):
            lengths = np.linalg.norm(
                vertices[cells[:, i]] - vertices[cells[:, j]], axis=1
            )
            diameters = np.maximum(diameters, lengths)
    return diameters


def criss_cross(
    nx: int, ny: int, bounds: Bounds
) -> tuple[FloatArray, IntArray]:
    """
    Build vertices and triangles of a criss-cross triangulation of the
    rectangle `bounds`, given as x0, x1, y0, y1, with `nx` by `ny` grid
    rectangles that are each split into four triangles about their center.
    """

    if nx < 1 or ny < 1:
        raise InvalidGeometry(f"Cell counts must be positive, got {nx}x{ny}")
    x0, x1, y0, y1 = bounds
    if not x1 > x0 or not y1 > y0:
        raise InvalidGeometry(f"Bounds {bounds} are degenerate or inverted")

    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    grid_x, grid_y = np.meshgrid(xs, ys)
    grid = np.column_stack((grid_x.ravel(), grid_y.ravel()))
    mid_x, mid_y = np.meshgrid(
        0.5 * (xs[:-1] + xs[1:]), 0.5 * (ys[:-1] + ys[1:])
    )
    centers = np.column_stack((mid_x.ravel(), mid_y.ravel()))
    vertices = np.vstack((grid, centers))

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    a = (j * (nx + 1) + i).ravel()
    b = a + 1
    d = a + nx + 1
    c = d + 1
    m = len(grid) + (j * nx + i).ravel()
    cells = np.stack(
        (
            np.column_stack((a, b, m)),
            np.column_stack((b, c, m)),
            np.column_stack((c, d, m)),
            np.column_stack((d, a, m)),
        ),
        axis=1,
    ).reshape(-1, 3)
    return vertices, cells.astype(np.int64)


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """
    Conforming triangulation with positively oriented cells.
    """

    vertices: FloatArray
    cells: IntArray

    cell_kind: ClassVar[str] = "triangle"

    def __post_init__(self) -> None:
        if self.cells.ndim != 2 or self.cells.shape[1] != 3:
            raise InvalidGeometry("Triangle cells must have three vertices")
        if np.any(self.areas <= 0.0):
            raise InvalidGeometry("Triangles must be positively oriented")

    @property
    def n_vertices(self) -> int:
        """
        Retrieve the number of mesh vertices.
        """

        return len(self.vertices)

    @property
    def n_cells(self) -> int:
        """
        Retrieve the number of mesh cells.
        """

        return len(self.cells)

    @cached_property
    def areas(self) -> FloatArray:
        """
        Retrieve the area of each triangle.
        """

        return signed_areas(self.vertices, self.cells)

    @property
    def measures(self) -> FloatArray:
        """
        Retrieve the measure of each cell.
        """

        return self.areas

    @cached_property
    def _topology(self) -> tuple[IntArray, IntArray, IntArray]:
        return triangle_edges(self.cells)

    @property
    def edges(self) -> IntArray:
        """
        Retrieve the unique edges as pairs of vertex indices.
        """

        return self._topology[0]

    @property
    def cell_edges(self) -> IntArray:
        """
        Retrieve the edge indices of the local edges of every cell, which are
        ordered as vertex pairs (0, 1), (1, 2) and (2, 0).
        """

        return self._topology[1]

    @property
    def n_edges(self) -> int:
        """
        Retrieve the number of unique edges.
        """

        return len(self.edges)

    @cached_property
    def boundary_edge_indices(self) -> IntArray:
        """
        Retrieve indices of edges that belong to only one cell.
        """

        return np.flatnonzero(self._topology[2] == 1)

    @property
    def boundary_edges(self) -> IntArray:
        """
        Retrieve the boundary edges as pairs of vertex indices.
        """

        return self.edges[self.boundary_edge_indices]

    @cached_property
    def boundary_vertices(self) -> IntArray:
        """
        Retrieve sorted indices of vertices on the boundary.
        """

        return np.unique(self.boundary_edges)

    @cached_property
    def diameters(self) -> FloatArray:
        """
        Retrieve the diameter of every cell.
        """

        return max_diameter(self.vertices, self.cells)

    @property
    def h(self) -> float:
        """
        Retrieve the maximum cell diameter.
        """

        return float(self.diameters.max())

    @cached_property
    def jacobians(self) -> FloatArray:
        """
        Retrieve the Jacobian matrices of the affine maps from the reference
        triangle to every cell, with the edge vectors as columns.
        """

        a = self.vertices[self.cells[:, 0]]
        columns = (
            self.vertices[self.cells[:, 1]] - a,
            self.vertices[self.cells[:, 2]] - a,
        )
        return np.stack(columns, axis=2)

    @cached_property
    def inverse_jacobians(self) -> FloatArray:
        """
        Retrieve the inverse Jacobian matrices of every cell.
        """

        return np.linalg.inv(self.jacobians)

    @cached_property
    def centroids(self) -> FloatArray:
        """
        Retrieve the centroid of every cell.
        """

        return self.vertices[self.cells].mean(axis=1)

    def map_points(self, cells: IntArray, ref_points: FloatArray) -> FloatArray:
        """
        Map reference coordinates within the given cells to physical points.
        """

        origin = self.vertices[self.cells[cells, 0]]
        jacobians = self.jacobians[cells]
        return origin + np.einsum("nab,nb->na", jacobians, ref_points)

    def barycentric(self, cells: IntArray, points: FloatArray) -> FloatArray:
        """
        Compute barycentric coordinates of points with respect to the given
        cells.
        """

        origin = self.vertices[self.cells[cells, 0]]
        ref = np.einsum(
            "nab,nb->na", self.inverse_jacobians[cells], points - origin
        )
        return np.column_stack((1.0 - ref[:, 0] - ref[:, 1], ref))
