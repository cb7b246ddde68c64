"""
Fixed fluid triangulation and point location.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .base import (
    EPS_GEOM,
    Bounds,
    FloatArray,
    IntArray,
    PointOutsideDomain,
    TriangleMesh,
    criss_cross,
)

LOGGER = logging.getLogger(__name__)


class PointLocation(NamedTuple):
    """
    Cell containing a point together with the barycentric coordinates of the
    point within that cell.
    """

    cell_index: int
    ref_coords: FloatArray


class _BucketGrid(NamedTuple):
    origin: FloatArray
    size: FloatArray
    shape: tuple[int, int]
    # Candidate cells per bucket in ascending order, padded with -1
    table: IntArray


@dataclass(frozen=True, eq=False)
class FluidMesh(TriangleMesh):
    """
    Triangulation of the fluid domain.
    """

    @cached_property
    def bounding_box(self) -> Bounds:
        """
        Retrieve the axis-aligned bounding box of the mesh as x0, x1, y0, y1.
        """

        low = self.vertices.min(axis=0)
        high = self.vertices.max(axis=0)
        return (float(low[0]), float(high[0]), float(low[1]), float(high[1]))

    @property
    def area(self) -> float:
        """
        Retrieve the total area of the domain.
        """

        return float(self.areas.sum())

    @property
    def tolerance(self) -> float:
        """
        Retrieve the geometric tolerance of the mesh, scaled by its mesh
        size. It bounds how far barycentric coordinates of located points
        may fall below zero.
        """

        return EPS_GEOM * self.h

    @cached_property
    def _buckets(self) -> _BucketGrid:
        x0, x1, y0, y1 = self.bounding_box
        extent = np.array([x1 - x0, y1 - y0])
        # Buckets are at least as large as the widest cell
        counts = np.maximum(1, np.floor(extent / self.h)).astype(np.int64)
        size = extent / counts
        origin = np.array([x0, y0])

        corners = self.vertices[self.cells]
        low = self._bucket_index(
            corners.min(axis=1) - self.tolerance, origin, size, counts
        )
        high = self._bucket_index(
            corners.max(axis=1) + self.tolerance, origin, size, counts
        )
        span = int((high - low).max()) + 1

        buckets: list[IntArray] = []
        members: list[IntArray] = []
        cell_index = np.arange(self.n_cells)
        for dx in range(span):
            for dy in range(span):
                index = low + np.array([dx, dy])
                inside = np.all(index <= high, axis=1)
                buckets.append(index[inside, 0] * counts[1] + index[inside, 1])
                members.append(cell_index[inside])

        bucket = np.concatenate(buckets)
        member = np.concatenate(members)
        order = np.lexsort((member, bucket))
        bucket = bucket[order]
        member = member[order]
        n_buckets = int(counts[0] * counts[1])
        sizes = np.bincount(bucket, minlength=n_buckets)
        starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
        table = np.full((n_buckets, max(1, int(sizes.max()))), -1)
        table[bucket, np.arange(len(bucket)) - starts[bucket]] = member
        LOGGER.debug(
            "Point location grid of %dx%d buckets, at most %d cells each",
            counts[0],
            counts[1],
            table.shape[1],
        )
        shape = (int(counts[0]), int(counts[1]))
        return _BucketGrid(origin, size, shape, table)

    @staticmethod
    def _bucket_index(
        points: FloatArray,
        origin: FloatArray,
        size: FloatArray,
        counts: IntArray,
    ) -> IntArray:
        index = np.floor((points - origin) / size).astype(np.int64)
        return np.clip(index, 0, counts - 1)

    def locate_points(self, points: FloatArray) -> tuple[IntArray, FloatArray]:
        """
        Locate many points in the mesh at once.

        Returns the index of the lowest-numbered cell containing each point
        and the barycentric coordinates of each point within that cell. A
        cell contains a point when no barycentric coordinate is below minus
        the geometric tolerance `EPS_GEOM * h_x` of the mesh. Raises
        `PointOutsideDomain` for the first point that lies outside the domain
        by more than the geometric tolerance of the mesh.
        """

        points = np.asarray(points, dtype=float).reshape(-1, 2)
        grid = self._buckets
        counts = np.array(grid.shape)
        index = self._bucket_index(points, grid.origin, grid.size, counts)
        candidates = grid.table[index[:, 0] * grid.shape[1] + index[:, 1]]

        n_points, width = candidates.shape
        valid = candidates >= 0
        flat_cells = np.where(valid, candidates, 0).reshape(-1)
        flat_points = np.repeat(points, width, axis=0)
        bary = self.barycentric(flat_cells, flat_points).reshape(
            n_points, width, 3
        )
        inside = valid & np.all(bary >= -self.tolerance, axis=2)
        found = inside.any(axis=1)
        first = np.argmax(inside, axis=1)
        rows = np.arange(n_points)
        cells = candidates[rows, first]
        coords = bary[rows, first]

        for missing in np.flatnonzero(~found):
            location = self._locate_exhaustive(points[missing])
            cells[missing] = location.cell_index
            coords[missing] = location.ref_coords

        return cells, coords

    def _locate_exhaustive(self, point: FloatArray) -> PointLocation:
        all_cells = np.arange(self.n_cells)
        points = np.broadcast_to(point, (self.n_cells, 2))
        bary = self.barycentric(all_cells, points)
        inside = np.flatnonzero(np.all(bary >= -self.tolerance, axis=1))
        if len(inside) == 0:
            raise PointOutsideDomain(point)
        LOGGER.debug("Located point %r by exhaustive scan", point)
        return PointLocation(int(inside[0]), bary[inside[0]])

    def locate_point(self, x: FloatArray) -> PointLocation:
        """
        Locate the cell containing the point `x`. A point on a shared edge or
        vertex is assigned to the incident cell with the lowest index.
        """

        cells, coords = self.locate_points(np.asarray(x, dtype=float))
        return PointLocation(int(cells[0]), coords[0])


def build_rect_fluid_mesh(nx: int, ny: int, bounds: Bounds) -> FluidMesh:
    """
    Build a criss-cross triangulation of a rectangle, which splits each of the
    `nx` by `ny` grid rectangles into four triangles about its center.

    The grid vertices are numbered row by row, followed by the rectangle
    centers in the same order. Cell `4 * (j * nx + i) + k` is the `k`th
    triangle of rectangle `(i, j)`, counterclockwise starting at its bottom
    side.
    """

    return FluidMesh(*criss_cross(nx, ny, bounds))
