"""
Meshes, parameters and initial data of a configured run.
"""

import logging

import numpy as np

from ..assembly.base import ModelParams
from ..config import RunConfig
from ..fem.space import FEFunction, FESpace
from ..mesh.base import FloatArray
from ..mesh.fluid import FluidMesh, build_rect_fluid_mesh
from ..mesh.solid import (
    SolidMesh,
    build_solid_curve_mesh,
    build_solid_disk_mesh,
    build_solid_square_mesh,
    circle_samples,
)
from .stepper import StepOptions

LOGGER = logging.getLogger(__name__)


def build_fluid(config: RunConfig, nx: int | None = None) -> FluidMesh:
    """
    Build the fluid mesh of a configuration, optionally with another number
    of grid rectangles along the x axis and a proportional number along the
    y axis.
    """

    fluid = config.fluid
    if nx is None:
        return build_rect_fluid_mesh(fluid.nx, fluid.ny, fluid.bounds)
    ny = max(1, round(nx * fluid.ny / fluid.nx))
    return build_rect_fluid_mesh(nx, ny, fluid.bounds)


def build_solid(config: RunConfig, level: int = 0) -> SolidMesh:
    """
    Build the solid reference mesh of a configuration, refined `level` more
    times than configured: one disk refinement, twice the square cells or
    twice the curve segments per level.
    """

    solid = config.solid
    if solid.kind == "disk":
        return build_solid_disk_mesh(
            solid.center, solid.radius, solid.refine + level
        )
    if solid.kind == "square":
        return build_solid_square_mesh(solid.bounds, solid.cells * 2**level)
    samples = circle_samples(
        solid.center, solid.radius, solid.segments * 2**level
    )
    return build_solid_curve_mesh(samples, closed=True)


def model_params(config: RunConfig) -> ModelParams:
    """
    Derive the coefficients of one time step of a configuration.
    """

    physics = config.physics
    return ModelParams.from_physics(
        physics.rho_f,
        physics.rho_s,
        physics.nu,
        physics.kappa,
        config.scheme.dt,
    )


def step_options(config: RunConfig) -> StepOptions:
    """
    Collect the discretization choices of a configuration.
    """

    scheme = config.scheme
    return StepOptions(
        variant=scheme.coupling,
        quad_degree=scheme.quad_degree,
        convection=scheme.convection,
        workers=scheme.workers,
        tolerance=config.tolerance.residual,
    )


def initial_map(config: RunConfig, space: FESpace) -> FEFunction:
    """
    Create the initial solid map: a stretch about the solid center along x
    with the inverse compression along y, or the constant map onto the
    center when the solid collapses.
    """

    solid = config.solid
    center = np.asarray(solid.center, dtype=float)
    if solid.kind == "square":
        x0, x1, y0, y1 = solid.bounds
        center = np.array([0.5 * (x0 + x1), 0.5 * (y0 + y1)])
    if solid.collapse:
        return space.interpolate(
            lambda points: np.broadcast_to(center, points.shape)
        )
    scale = np.array([solid.stretch, 1.0 / solid.stretch])

    def stretched(points: FloatArray) -> FloatArray:
        return center + scale * (points - center)

    return space.interpolate(stretched)


def initial_velocity(config: RunConfig, space: FESpace) -> FEFunction:
    """
    Create the initial fluid velocity: zero or a vortex derived from the
    stream function `sin^2(pi x) sin^2(pi y)` on the scaled fluid domain,
    which vanishes on the boundary and is divergence free.
    """

    fluid = config.fluid
    if fluid.initial == "zero":
        return space.zero()
    x0, x1, y0, y1 = fluid.bounds
    width = x1 - x0
    height = y1 - y0
    amplitude = fluid.amplitude

    def vortex(points: FloatArray) -> FloatArray:
        xi = np.pi * (points[:, 0] - x0) / width
        eta = np.pi * (points[:, 1] - y0) / height
        return amplitude * np.column_stack(
            (
                np.sin(xi) ** 2 * np.sin(2.0 * eta) * width / height,
                -np.sin(2.0 * xi) * np.sin(eta) ** 2,
            )
        )

    return space.interpolate(vortex)
