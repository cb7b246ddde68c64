"""
Legacy ASCII VTK output of meshes and discrete fields.
"""

from pathlib import Path
from typing import NamedTuple, TextIO

import numpy as np
from typing_extensions import override

from ..fem.space import FEFunction
from ..mesh.base import FloatArray, IntArray, TriangleMesh
from ..mesh.solid import SolidMesh, ThinSolidMesh
from .base import Writer

# Cell type identifiers of the legacy format
VTK_LINE = 3
VTK_TRIANGLE = 5

# Sub-triangles of a quadratic cell in terms of its six local nodes
_REFINED_CELLS = np.array([[0, 3, 5], [3, 1, 4], [5, 4, 2], [3, 4, 5]])


class MeshData(NamedTuple):
    """
    Points, cells and point fields of an unstructured grid.
    """

    points: FloatArray
    cells: IntArray
    cell_type: int
    # Scalar fields have one value per point, vector fields two
    point_data: dict[str, FloatArray]


def mesh_data(mesh: TriangleMesh | SolidMesh) -> MeshData:
    """
    Describe a mesh without fields.
    """

    cell_type = VTK_LINE if isinstance(mesh, ThinSolidMesh) else VTK_TRIANGLE
    return MeshData(mesh.vertices, mesh.cells, cell_type, {})


def fluid_data(
    u: FEFunction, p: FEFunction, refined: bool = False
) -> MeshData:
    """
    Describe the fluid velocity and pressure on the fluid mesh. Quadratic
    velocities are sampled at the mesh vertices, or with `refined` at all
    of their nodes on four linear sub-triangles per cell.
    """

    mesh = u.space.mesh
    n_vertices = mesh.n_vertices
    pressure = p.nodal_values[:, 0]
    if not refined or u.space.n_scalar == n_vertices:
        return MeshData(
            mesh.vertices,
            mesh.cells,
            VTK_TRIANGLE,
            {
                "velocity": u.nodal_values[:n_vertices],
                "pressure": pressure,
            },
        )

    if not isinstance(mesh, TriangleMesh):
        raise TypeError("Refined output requires a triangle mesh")
    cells = u.space.cell_dofs[:, _REFINED_CELLS].reshape(-1, 3)
    edges = mesh.edges
    midpoints = 0.5 * (pressure[edges[:, 0]] + pressure[edges[:, 1]])
    return MeshData(
        u.space.node_coordinates,
        cells,
        VTK_TRIANGLE,
        {
            "velocity": u.nodal_values,
            "pressure": np.concatenate((pressure, midpoints)),
        },
    )


def solid_data(x: FEFunction, lam: FEFunction | None = None) -> MeshData:
    """
    Describe the solid as the point set of its deformed vertices, with the
    displacement from the reference configuration and the multiplier.
    """

    mesh = x.space.mesh
    positions = x.nodal_values
    data = {"displacement": positions - mesh.vertices}
    if lam is not None:
        data["multiplier"] = lam.nodal_values
    base = mesh_data(mesh)
    return MeshData(positions, mesh.cells, base.cell_type, data)


class VTKWriter(Writer[MeshData]):
    """
    Legacy ASCII unstructured grid file writer.
    """

    def __init__(
        self, path: Path, model: MeshData, title: str = "dlmfd"
    ) -> None:
        super().__init__(path, model)
        self._title: str = title

    @staticmethod
    def _format(values: FloatArray) -> str:
        return " ".join(f"{value:.12g}" for value in values)

    @override
    def serialize(self, file: TextIO) -> None:
        data = self._model
        n_points = len(data.points)
        n_cells, n_local = data.cells.shape
        _ = file.write("# vtk DataFile Version 3.0\n")
        _ = file.write(f"{self._title}\nASCII\nDATASET UNSTRUCTURED_GRID\n")
        _ = file.write(f"POINTS {n_points} double\n")
        for point in data.points:
            _ = file.write(f"{self._format(point)} 0\n")
        _ = file.write(f"CELLS {n_cells} {n_cells * (n_local + 1)}\n")
        for cell in data.cells:
            _ = file.write(f"{n_local} {' '.join(str(i) for i in cell)}\n")
        _ = file.write(f"CELL_TYPES {n_cells}\n")
        _ = file.write(f"{data.cell_type}\n" * n_cells)
        if not data.point_data:
            return

        _ = file.write(f"POINT_DATA {n_points}\n")
        for name, values in data.point_data.items():
            if values.ndim == 1:
                _ = file.write(f"SCALARS {name} double 1\n")
                _ = file.write("LOOKUP_TABLE default\n")
                for value in values:
                    _ = file.write(f"{value:.12g}\n")
            else:
                _ = file.write(f"VECTORS {name} double\n")
                for value in values:
                    _ = file.write(f"{self._format(value)} 0\n")
