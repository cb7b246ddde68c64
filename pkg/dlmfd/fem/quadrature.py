"""
Quadrature rules on reference cells.
"""

from dataclasses import dataclass
from functools import cache
from math import ceil

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from ..mesh.base import FloatArray

MAX_DEGREE = 30


class UnsupportedQuadrature(ValueError):
    """
    Error indicating that no quadrature rule of the requested degree exists
    for a cell kind.
    """


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """
    Quadrature points in reference coordinates with weights that sum to the
    measure of the reference cell.

    The reference triangle has vertices (0, 0), (1, 0) and (0, 1) and the
    reference segment is the unit interval.
    """

    points: FloatArray
    weights: FloatArray
    degree: int
    cell_kind: str

    def __len__(self) -> int:
        return len(self.weights)


def _gauss_points(degree: int) -> int:
    return max(1, ceil((degree + 1) / 2))


@cache
def quadrature(degree: int, cell_kind: str) -> QuadratureRule:
    """
    Retrieve a quadrature rule which integrates polynomials up to total
    `degree` exactly on the reference cell of `cell_kind`.

    Segments use Gauss-Legendre rules. Triangles use a collapsed product of a
    Gauss-Legendre rule and a Gauss-Jacobi rule that absorbs the Jacobian of
    the collapse; degree 1 yields the centroid rule.
    """

    if not 0 <= degree <= MAX_DEGREE:
        raise UnsupportedQuadrature(
            f"Quadrature degree {degree} is not within 0 and {MAX_DEGREE}"
        )

    n = _gauss_points(degree)
    nodes, weights = roots_legendre(n)
    line_points = 0.5 * (nodes + 1.0)
    line_weights = 0.5 * weights
    if cell_kind == "segment":
        return QuadratureRule(
            line_points.reshape(-1, 1), line_weights, degree, cell_kind
        )
    if cell_kind != "triangle":
        raise UnsupportedQuadrature(f"Unknown cell kind {cell_kind!r}")

    # Collapsed coordinate with weight (1 - t) on [-1, 1]
    jacobi_nodes, jacobi_weights = roots_jacobi(n, 1.0, 0.0)
    b = 0.5 * (jacobi_nodes + 1.0)
    b_weights = 0.25 * jacobi_weights
    a_grid, b_grid = np.meshgrid(line_points, b, indexing="ij")
    points = np.column_stack(
        ((a_grid * (1.0 - b_grid)).ravel(), b_grid.ravel())
    )
    weights = np.outer(line_weights, b_weights).ravel()
    return QuadratureRule(points, weights, degree, cell_kind)


@cache
def composite_quadrature(
    degree: int, cell_kind: str, divisions: int
) -> QuadratureRule:
    """
    Retrieve a composite quadrature rule which applies the rule of `degree`
    on each cell of a uniform subdivision of the reference cell into
    `divisions` parts per edge. This integrates integrands that are smooth on
    the subcells but not across them more accurately.
    """

    base = quadrature(degree, cell_kind)
    if divisions <= 1:
        return base

    scale = 1.0 / divisions
    offsets: list[tuple[int, int]] = []
    flipped: list[bool] = []
    if cell_kind == "segment":
        points = np.concatenate(
            [(base.points + i) * scale for i in range(divisions)]
        )
        weights = np.tile(base.weights * scale, divisions)
        return QuadratureRule(points, weights, degree, cell_kind)

    for i in range(divisions):
        for j in range(divisions - i):
            offsets.append((i, j))
            flipped.append(False)
            if i + j < divisions - 1:
                offsets.append((i + 1, j + 1))
                flipped.append(True)

    parts: list[FloatArray] = []
    for (i, j), flip in zip(offsets, flipped, strict=True):
        local = -base.points if flip else base.points
        parts.append((local + np.array([i, j])) * scale)
    points = np.concatenate(parts)
    weights = np.tile(base.weights * scale**2, len(offsets))
    return QuadratureRule(points, weights, degree, cell_kind)
