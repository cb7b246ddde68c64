"""
Immersed solid reference meshes.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar

import numpy as np

from .base import (
    Bounds,
    FloatArray,
    IntArray,
    InvalidGeometry,
    TriangleMesh,
    criss_cross,
    max_diameter,
    triangle_edges,
)

LOGGER = logging.getLogger(__name__)

Point = tuple[float, float]


@dataclass(frozen=True, eq=False)
class ThickSolidMesh(TriangleMesh):
    """
    Triangulation of a reference domain of codimension zero.
    """

    codim: ClassVar[int] = 0

    @property
    def measure(self) -> float:
        """
        Retrieve the total area of the reference domain.
        """

        return float(self.areas.sum())


@dataclass(frozen=True, eq=False)
class ThinSolidMesh:
    """
    Segment mesh of a reference curve of codimension one, which stores the
    embedded coordinates of its vertices.
    """

    vertices: FloatArray
    cells: IntArray
    closed: bool = False

    codim: ClassVar[int] = 1
    cell_kind: ClassVar[str] = "segment"

    def __post_init__(self) -> None:
        if self.cells.ndim != 2 or self.cells.shape[1] != 2:
            raise InvalidGeometry("Segment cells must have two vertices")
        if np.any(self.lengths <= 0.0):
            raise InvalidGeometry("Segments must have positive length")

    @property
    def n_vertices(self) -> int:
        """
        Retrieve the number of mesh vertices.
        """

        return len(self.vertices)

    @property
    def n_cells(self) -> int:
        """
        Retrieve the number of segments.
        """

        return len(self.cells)

    @cached_property
    def lengths(self) -> FloatArray:
        """
        Retrieve the reference length of each segment.
        """

        return max_diameter(self.vertices, self.cells)

    @property
    def measures(self) -> FloatArray:
        """
        Retrieve the measure of each cell.
        """

        return self.lengths

    @property
    def diameters(self) -> FloatArray:
        """
        Retrieve the diameter of each cell.
        """

        return self.lengths

    @property
    def h(self) -> float:
        """
        Retrieve the maximum segment length.
        """

        return float(self.lengths.max())

    @property
    def measure(self) -> float:
        """
        Retrieve the total length of the reference curve.
        """

        return float(self.lengths.sum())

    @cached_property
    def arclength(self) -> FloatArray:
        """
        Retrieve the arclength parameter of each vertex along the curve.
        """

        walk = self.cells[:, 0]
        if not self.closed:
            walk = np.append(walk, self.cells[-1, 1])
        steps = np.concatenate(([0.0], np.cumsum(self.lengths)))
        parameters = np.zeros(self.n_vertices)
        parameters[walk] = steps[: len(walk)]
        return parameters

    def map_points(self, cells: IntArray, ref_points: FloatArray) -> FloatArray:
        """
        Map reference parameters in [0, 1] within the given segments to points
        on the embedded reference curve.
        """

        start = self.vertices[self.cells[cells, 0]]
        end = self.vertices[self.cells[cells, 1]]
        t = ref_points.reshape(-1, 1)
        return (1.0 - t) * start + t * end


SolidMesh = ThickSolidMesh | ThinSolidMesh


def _refine(mesh: ThickSolidMesh) -> tuple[FloatArray, IntArray, IntArray]:
    # Uniform red refinement: every triangle splits into four about the
    # midpoints of its edges, which are numbered after the vertices
    edges, cell_edges, counts = triangle_edges(mesh.cells)
    midpoints = 0.5 * (mesh.vertices[edges[:, 0]] + mesh.vertices[edges[:, 1]])
    vertices = np.vstack((mesh.vertices, midpoints))
    v0, v1, v2 = mesh.cells.T
    m01, m12, m20 = (mesh.n_vertices + cell_edges).T
    cells = np.stack(
        (
            np.column_stack((v0, m01, m20)),
            np.column_stack((m01, v1, m12)),
            np.column_stack((m20, m12, v2)),
            np.column_stack((m01, m12, m20)),
        ),
        axis=1,
    ).reshape(-1, 3)
    boundary = mesh.n_vertices + np.flatnonzero(counts == 1)
    return vertices, cells, boundary


def build_solid_disk_mesh(
    center: Point, radius: float, n_refine: int
) -> ThickSolidMesh:
    """
    Build a triangulation of a disk. The coarse mesh has a center vertex, a
    ring of 8 vertices at half the radius and a ring of 16 vertices on the
    circle, giving 32 triangles. Each refinement splits every triangle into
    four and projects new boundary vertices onto the circle.
    """

    if radius <= 0.0:
        raise InvalidGeometry(f"Disk radius must be positive, got {radius}")
    if n_refine < 0:
        raise InvalidGeometry(f"Refinement must be nonnegative: {n_refine}")

    origin = np.asarray(center, dtype=float)
    inner_angles = 2.0 * np.pi * np.arange(8) / 8
    outer_angles = 2.0 * np.pi * np.arange(16) / 16
    vertices = np.vstack(
        (
            origin,
            origin
            + 0.5
            * radius
            * np.column_stack((np.cos(inner_angles), np.sin(inner_angles))),
            origin
            + radius
            * np.column_stack((np.cos(outer_angles), np.sin(outer_angles))),
        )
    )
    k = np.arange(8)
    inner = 1 + k
    inner_next = 1 + (k + 1) % 8
    outer = 9 + 2 * k
    outer_mid = outer + 1
    outer_next = 9 + (2 * k + 2) % 16
    cells = np.vstack(
        (
            np.column_stack((np.zeros(8, dtype=np.int64), inner, inner_next)),
            np.column_stack((inner, outer, outer_mid)),
            np.column_stack((inner, outer_mid, inner_next)),
            np.column_stack((inner_next, outer_mid, outer_next)),
        )
    )
    mesh = ThickSolidMesh(vertices, cells.astype(np.int64))
    for _ in range(n_refine):
        vertices, cells, boundary = _refine(mesh)
        offset = vertices[boundary] - origin
        vertices[boundary] = origin + radius * offset / np.linalg.norm(
            offset, axis=1, keepdims=True
        )
        mesh = ThickSolidMesh(vertices, cells)

    LOGGER.debug(
        "Disk mesh with %d cells, h_s=%.4g, area %.6g",
        mesh.n_cells,
        mesh.h,
        mesh.measure,
    )
    return mesh


def build_solid_square_mesh(bounds: Bounds, cells: int) -> ThickSolidMesh:
    """
    Build a criss-cross triangulation of a rectangular reference domain with
    `cells` grid rectangles per side.
    """

    return ThickSolidMesh(*criss_cross(cells, cells, bounds))


def build_solid_curve_mesh(
    samples: FloatArray | list[Point], closed: bool
) -> ThinSolidMesh:
    """
    Build a segment mesh of the polyline through the ordered `samples`, which
    also connects the last sample to the first one if `closed` is enabled.
    """

    points = np.asarray(samples, dtype=float).reshape(-1, 2)
    if len(points) < 2:
        raise InvalidGeometry("A curve needs at least two points")
    following = np.roll(points, -1, axis=0) if closed else points[1:]
    steps = np.linalg.norm(following - points[: len(following)], axis=1)
    if np.any(steps == 0.0):
        duplicate = int(np.flatnonzero(steps == 0.0)[0])
        raise InvalidGeometry(
            f"Consecutive curve points {duplicate} and "
            + f"{(duplicate + 1) % len(points)} coincide"
        )

    index = np.arange(len(points))
    if closed:
        if len(points) < 3:
            raise InvalidGeometry("A closed curve needs at least three points")
        segments = np.column_stack((index, np.roll(index, -1)))
    else:
        segments = np.column_stack((index[:-1], index[1:]))
    return ThinSolidMesh(points, segments.astype(np.int64), closed)


def circle_samples(center: Point, radius: float, segments: int) -> FloatArray:
    """
    Sample points on a circle, counterclockwise from angle zero, for a closed
    curve with the given number of segments.
    """

    if radius <= 0.0 or segments < 3:
        raise InvalidGeometry(
            f"Invalid circle with radius {radius} and {segments} segments"
        )
    angles = 2.0 * np.pi * np.arange(segments) / segments
    return np.asarray(center, dtype=float) + radius * np.column_stack(
        (np.cos(angles), np.sin(angles))
    )


def deformation_measures(mesh: SolidMesh, positions: FloatArray) -> FloatArray:
    """
    Compute the local deformation measure of each solid cell for a piecewise
    linear map given by the deformed `positions` of the vertices: the
    determinant of the deformation gradient for thick meshes, or the stretch
    of each segment for thin meshes.
    """

    if isinstance(mesh, ThinSolidMesh):
        start = positions[mesh.cells[:, 0]]
        end = positions[mesh.cells[:, 1]]
        return np.linalg.norm(end - start, axis=1) / mesh.lengths

    a = positions[mesh.cells[:, 0]]
    deformed = np.stack(
        (positions[mesh.cells[:, 1]] - a, positions[mesh.cells[:, 2]] - a),
        axis=2,
    )
    return np.linalg.det(deformed) / np.linalg.det(mesh.jacobians)
