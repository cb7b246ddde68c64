"""
Lagrange reference elements.
"""

from abc import ABCMeta, abstractmethod
from typing import ClassVar, final

import numpy as np
from typing_extensions import override

from ..mesh.base import FloatArray


class UnsupportedElement(ValueError):
    """
    Error indicating that an element family is not available on a cell kind.
    """


class Element(metaclass=ABCMeta):
    """
    Reference element with nodal basis functions.
    """

    family: ClassVar[str] = ""
    cell_kind: ClassVar[str] = ""
    degree: ClassVar[int] = 0
    # Reference coordinates of the nodes of the basis functions
    nodes: ClassVar[FloatArray] = np.zeros((0, 0))

    @property
    def n_local(self) -> int:
        """
        Retrieve the number of basis functions on a cell.
        """

        return len(self.nodes)

    @property
    def dim(self) -> int:
        """
        Retrieve the dimension of the reference cell.
        """

        return self.nodes.shape[1]

    @abstractmethod
    def values(self, points: FloatArray) -> FloatArray:
        """
        Evaluate all basis functions at reference points, with one row per
        point and one column per basis function.
        """

        raise NotImplementedError("Must be implemented by subclasses")

    @abstractmethod
    def gradients(self, points: FloatArray) -> FloatArray:
        """
        Evaluate the reference gradients of all basis functions at reference
        points, indexed by point, basis function and reference direction.
        """

        raise NotImplementedError("Must be implemented by subclasses")


def _barycentric(points: FloatArray) -> FloatArray:
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.column_stack((1.0 - points[:, 0] - points[:, 1], points))


# Reference gradients of the barycentric coordinates
_BARYCENTRIC_GRADIENTS = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])


@final
class P1Triangle(Element):
    """
    Linear element on triangles.
    """

    family: ClassVar[str] = "P1"
    cell_kind: ClassVar[str] = "triangle"
    degree: ClassVar[int] = 1
    nodes: ClassVar[FloatArray] = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

    @override
    def values(self, points: FloatArray) -> FloatArray:
        return _barycentric(points)

    @override
    def gradients(self, points: FloatArray) -> FloatArray:
        n_points = len(_barycentric(points))
        return np.broadcast_to(_BARYCENTRIC_GRADIENTS, (n_points, 3, 2)).copy()


@final
class P2Triangle(Element):
    """
    Quadratic element on triangles with nodes at the vertices followed by the
    midpoints of the local edges (0, 1), (1, 2) and (2, 0).
    """

    family: ClassVar[str] = "P2"
    cell_kind: ClassVar[str] = "triangle"
    degree: ClassVar[int] = 2
    nodes: ClassVar[FloatArray] = np.array(
        [
            [0.0, 0.0],
            [1.0, 0.0],
            [0.0, 1.0],
            [0.5, 0.0],
            [0.5, 0.5],
            [0.0, 0.5],
        ]
    )
    _edges: ClassVar[tuple[tuple[int, int], ...]] = ((0, 1), (1, 2), (2, 0))

    @override
    def values(self, points: FloatArray) -> FloatArray:
        lam = _barycentric(points)
        vertex = lam * (2.0 * lam - 1.0)
        edge = np.column_stack(
            [4.0 * lam[:, a] * lam[:, b] for a, b in self._edges]
        )
        return np.hstack((vertex, edge))

    @override
    def gradients(self, points: FloatArray) -> FloatArray:
        lam = _barycentric(points)
        grad = _BARYCENTRIC_GRADIENTS
        vertex = (4.0 * lam - 1.0)[:, :, np.newaxis] * grad[np.newaxis]
        edge = np.stack(
            [
                4.0
                * (
                    lam[:, a, np.newaxis] * grad[b]
                    + lam[:, b, np.newaxis] * grad[a]
                )
                for a, b in self._edges
            ],
            axis=1,
        )
        return np.concatenate((vertex, edge), axis=1)


@final
class P1Segment(Element):
    """
    Linear element on segments.
    """

    family: ClassVar[str] = "P1"
    cell_kind: ClassVar[str] = "segment"
    degree: ClassVar[int] = 1
    nodes: ClassVar[FloatArray] = np.array([[0.0], [1.0]])

    @override
    def values(self, points: FloatArray) -> FloatArray:
        t = np.asarray(points, dtype=float).reshape(-1)
        return np.column_stack((1.0 - t, t))

    @override
    def gradients(self, points: FloatArray) -> FloatArray:
        n_points = np.asarray(points).reshape(-1).shape[0]
        grad = np.array([[-1.0], [1.0]])
        return np.broadcast_to(grad, (n_points, 2, 1)).copy()


ELEMENTS: dict[tuple[str, str], type[Element]] = {
    ("P1", "triangle"): P1Triangle,
    ("P2", "triangle"): P2Triangle,
    ("P1", "segment"): P1Segment,
}


def get_element(family: str, cell_kind: str) -> Element:
    """
    Retrieve the reference element of `family` on cells of `cell_kind`.
    """

    try:
        return ELEMENTS[(family, cell_kind)]()
    except KeyError:
        raise UnsupportedElement(
            f"Element family {family} is not supported on {cell_kind} cells"
        ) from None
