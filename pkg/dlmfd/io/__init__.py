"""
File reading and writing.
"""

from .config import ConfigReader, ConfigWriter
from .manifest import ManifestWriter, build_manifest, config_hash
from .matrix import dump_matrices, dump_matrix
from .table import Table, TableWriter
from .vtk import MeshData, VTKWriter, fluid_data, mesh_data, solid_data

__all__ = [
    "ConfigReader",
    "ConfigWriter",
    "ManifestWriter",
    "build_manifest",
    "config_hash",
    "dump_matrices",
    "dump_matrix",
    "Table",
    "TableWriter",
    "MeshData",
    "VTKWriter",
    "fluid_data",
    "mesh_data",
    "solid_data",
]
