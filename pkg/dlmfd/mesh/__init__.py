"""
Fluid and solid meshes.
"""

from .base import InvalidGeometry, PointOutsideDomain, TriangleMesh
from .fluid import FluidMesh, PointLocation, build_rect_fluid_mesh
from .solid import (
    SolidMesh,
    ThickSolidMesh,
    ThinSolidMesh,
    build_solid_curve_mesh,
    build_solid_disk_mesh,
    build_solid_square_mesh,
    circle_samples,
    deformation_measures,
)

__all__ = [
    "InvalidGeometry",
    "PointOutsideDomain",
    "TriangleMesh",
    "FluidMesh",
    "PointLocation",
    "build_rect_fluid_mesh",
    "SolidMesh",
    "ThickSolidMesh",
    "ThinSolidMesh",
    "build_solid_curve_mesh",
    "build_solid_disk_mesh",
    "build_solid_square_mesh",
    "circle_samples",
    "deformation_measures",
]
