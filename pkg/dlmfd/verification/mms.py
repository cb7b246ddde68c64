"""
Manufactured solution of the stationary problem with a thick solid.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from ..assembly.base import CouplingConfig, ModelParams
from ..assembly.coupling import assemble_coupling_load
from ..assembly.loads import assemble_gradient_load, assemble_load
from ..fem.space import Field, FESpace
from ..mesh.base import Bounds, FloatArray
from ..mesh.fluid import FluidMesh, build_rect_fluid_mesh
from ..mesh.solid import ThickSolidMesh, build_solid_square_mesh
from ..saddle.blocks import Spaces, build_spaces
from .base import MMSInconsistent

LOGGER = logging.getLogger(__name__)

# Gradient fields return one matrix of component by direction per point
GradientField = Callable[[FloatArray], FloatArray]

UNIT_SQUARE: Bounds = (0.0, 1.0, 0.0, 1.0)
REFERENCE_SQUARE: Bounds = (0.25, 0.75, 0.25, 0.75)

MMS_TOLERANCE = 1e-8
CHECK_TESTS = 20
CHECK_DEGREE = 12

PI = np.pi


@dataclass(frozen=True, eq=False)
class MMSCase:
    """
    Exact fields of the stationary problem and the data derived from them.

    Fields are called with an array of points and return one row of
    components per point, gradient fields one matrix per point. The solid
    fields are functions of reference coordinates in `solid_bounds`.
    """

    params: ModelParams
    u: Field
    grad_u: GradientField
    p: Field
    x: Field
    grad_x: GradientField
    lam: Field
    xbar: Field
    f: Field
    g: Field
    d: Field
    fluid_bounds: Bounds = UNIT_SQUARE
    solid_bounds: Bounds = REFERENCE_SQUARE


def _s(t: FloatArray) -> FloatArray:
    return np.sin(PI * t) ** 2


def _ds(t: FloatArray) -> FloatArray:
    return PI * np.sin(2.0 * PI * t)


def _dds(t: FloatArray) -> FloatArray:
    return 2.0 * PI**2 * np.cos(2.0 * PI * t)


def _ddds(t: FloatArray) -> FloatArray:
    return -4.0 * PI**3 * np.sin(2.0 * PI * t)


def _c(t: FloatArray) -> FloatArray:
    return np.cos(4.0 * PI * (t - 0.25))


def _dc(t: FloatArray) -> FloatArray:
    return -4.0 * PI * np.sin(4.0 * PI * (t - 0.25))


def exact_velocity(points: FloatArray) -> FloatArray:
    """
    Evaluate the curl of the stream function `sin^2(pi x) sin^2(pi y)`.
    """

    x, y = points[:, 0], points[:, 1]
    return np.column_stack((_s(x) * _ds(y), -_ds(x) * _s(y)))


def exact_velocity_gradient(points: FloatArray) -> FloatArray:
    """
    Evaluate the gradient of the exact velocity.
    """

    x, y = points[:, 0], points[:, 1]
    gradient = np.empty((len(points), 2, 2))
    gradient[:, 0, 0] = _ds(x) * _ds(y)
    gradient[:, 0, 1] = _s(x) * _dds(y)
    gradient[:, 1, 0] = -_dds(x) * _s(y)
    gradient[:, 1, 1] = -_ds(x) * _ds(y)
    return gradient


def exact_velocity_laplacian(points: FloatArray) -> FloatArray:
    """
    Evaluate the vector Laplacian of the exact velocity.
    """

    x, y = points[:, 0], points[:, 1]
    return np.column_stack(
        (
            _dds(x) * _ds(y) + _s(x) * _ddds(y),
            -_ddds(x) * _s(y) - _ds(x) * _dds(y),
        )
    )


def exact_pressure(points: FloatArray) -> FloatArray:
    """
    Evaluate the exact pressure, which has zero mean on the unit square.
    """

    x, y = points[:, 0], points[:, 1]
    return np.sin(2.0 * PI * x) * np.cos(2.0 * PI * y)


def exact_pressure_gradient(points: FloatArray) -> FloatArray:
    """
    Evaluate the gradient of the exact pressure.
    """

    x, y = points[:, 0], points[:, 1]
    return np.column_stack(
        (
            2.0 * PI * np.cos(2.0 * PI * x) * np.cos(2.0 * PI * y),
            -2.0 * PI * np.sin(2.0 * PI * x) * np.sin(2.0 * PI * y),
        )
    )


def exact_map(points: FloatArray) -> FloatArray:
    """
    Evaluate the exact solid map, whose normal derivative vanishes on the
    boundary of the reference square.
    """

    c1, c2 = _c(points[:, 0]), _c(points[:, 1])
    return np.column_stack((c1 * c2, c1 + c2))


def exact_map_gradient(points: FloatArray) -> FloatArray:
    """
    Evaluate the gradient of the exact solid map.
    """

    s1, s2 = points[:, 0], points[:, 1]
    gradient = np.empty((len(points), 2, 2))
    gradient[:, 0, 0] = _dc(s1) * _c(s2)
    gradient[:, 0, 1] = _c(s1) * _dc(s2)
    gradient[:, 1, 0] = _dc(s1)
    gradient[:, 1, 1] = _dc(s2)
    return gradient


def exact_map_laplacian(points: FloatArray) -> FloatArray:
    """
    Evaluate the vector Laplacian of the exact solid map.
    """

    c1, c2 = _c(points[:, 0]), _c(points[:, 1])
    k2 = (4.0 * PI) ** 2
    return np.column_stack((-2.0 * k2 * c1 * c2, -k2 * (c1 + c2)))


def exact_multiplier(points: FloatArray) -> FloatArray:
    """
    Evaluate the exact multiplier.
    """

    s1, s2 = points[:, 0], points[:, 1]
    return np.column_stack(
        (
            np.sin(2.0 * PI * s1) * np.sin(2.0 * PI * s2),
            np.cos(PI * (s1 + s2)),
        )
    )


def _identity(points: FloatArray) -> FloatArray:
    return np.array(points, dtype=float)


def indicator(bounds: Bounds) -> Callable[[FloatArray], FloatArray]:
    """
    Create the indicator function of a closed rectangle.
    """

    x0, x1, y0, y1 = bounds

    def inside(points: FloatArray) -> FloatArray:
        x, y = points[:, 0], points[:, 1]
        return ((x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)).astype(float)

    return inside


def mms_case(params: ModelParams | None = None) -> MMSCase:
    """
    Create the manufactured case on the unit square with the solid square
    `[1/4, 3/4]^2` embedded by the identity and coupled in L2.

    The data follow from the strong form: the fluid load
    `f = alpha u - nu/2 lap u + grad p + chi_B lambda`, where the viscous
    term reduces to half the Laplacian for divergence free velocities, the
    solid load `g = beta X - gamma lap X - lambda` and the constraint data
    `d = u - X` on the reference square.
    """

    if params is None:
        params = ModelParams(alpha=1.0, beta=1.0, gamma=1.0, nu=1.0)
    chi = indicator(REFERENCE_SQUARE)

    def f(points: FloatArray) -> FloatArray:
        return (
            params.alpha * exact_velocity(points)
            - 0.5 * params.nu * exact_velocity_laplacian(points)
            + exact_pressure_gradient(points)
            + chi(points)[:, np.newaxis] * exact_multiplier(points)
        )

    def g(points: FloatArray) -> FloatArray:
        return (
            params.beta * exact_map(points)
            - params.gamma * exact_map_laplacian(points)
            - exact_multiplier(points)
        )

    def d(points: FloatArray) -> FloatArray:
        return exact_velocity(_identity(points)) - exact_map(points)

    return MMSCase(
        params=params,
        u=exact_velocity,
        grad_u=exact_velocity_gradient,
        p=exact_pressure,
        x=exact_map,
        grad_x=exact_map_gradient,
        lam=exact_multiplier,
        xbar=_identity,
        f=f,
        g=g,
        d=d,
    )


def solid_cells(nx: int, ratio: float) -> int:
    """
    Determine the number of criss-cross rectangles per side of the solid
    square such that the fluid to solid mesh size ratio is about `ratio`
    for a fluid grid of `nx` rectangles per side of the unit square.
    """

    width = REFERENCE_SQUARE[1] - REFERENCE_SQUARE[0]
    return max(1, round(nx * ratio * width))


def case_meshes(
    case: MMSCase, nx: int, cells: int
) -> tuple[FluidMesh, ThickSolidMesh]:
    """
    Build the fluid grid with `nx` rectangles per side and the solid mesh
    with `cells` rectangles per side of a manufactured case.
    """

    return (
        build_rect_fluid_mesh(nx, nx, case.fluid_bounds),
        build_solid_square_mesh(case.solid_bounds, cells),
    )


def case_coupling(
    case: MMSCase, spaces: Spaces, quad_degree: int = 5
) -> CouplingConfig:
    """
    Create the L2 coupling configuration at the embedding of a case.
    """

    return CouplingConfig(
        "L2", 0, spaces.solid.interpolate(case.xbar), quad_degree
    )


def _test_vectors(
    rng: np.random.Generator, space: FESpace, free: bool
) -> FloatArray:
    vector = rng.uniform(-1.0, 1.0, space.n_dofs)
    if free:
        vector[space.boundary_dofs] = 0.0
    return vector


def weak_residual(
    case: MMSCase,
    nx: int = 8,
    degree: int = CHECK_DEGREE,
    tests: int = CHECK_TESTS,
    seed: int = 0,
) -> float:
    """
    Evaluate the weak form of the stationary problem with the exact fields
    of a case against random discrete test functions.

    The fluid grid has `nx` rectangles per side and the solid mesh matches
    it on the reference square, so every integrand is smooth on each cell
    of the high order quadrature. Only first derivatives of the exact fields
    enter the forms, which makes the check independent of the second
    derivatives in the derived data. Returns the largest absolute residual
    over the test functions, each scaled to unit coefficient norm.
    """

    fluid, solid = case_meshes(case, nx, solid_cells(nx, 1.0))
    spaces = build_spaces(fluid, solid)
    config = case_coupling(case, spaces, degree)
    params = case.params
    velocity, pressure, solid_space, multiplier = spaces

    def viscous_stress(points: FloatArray) -> FloatArray:
        gradient = case.grad_u(points)
        symmetric = 0.5 * (gradient + np.swapaxes(gradient, 1, 2))
        identity = np.eye(2)[np.newaxis] * case.p(points)[:, None, None]
        return params.nu * symmetric - identity

    def divergence(points: FloatArray) -> FloatArray:
        return np.trace(case.grad_u(points), axis1=1, axis2=2)

    def elastic_stress(points: FloatArray) -> FloatArray:
        return params.gamma * case.grad_x(points)

    momentum = (
        assemble_load(velocity, case.f, degree, 2)
        - params.alpha * assemble_load(velocity, case.u, degree)
        - assemble_gradient_load(velocity, viscous_stress, degree)
        - assemble_coupling_load(velocity, case.lam, config)
    )
    mass = assemble_load(pressure, divergence, degree)
    elastic = (
        assemble_load(solid_space, case.g, degree)
        - params.beta * assemble_load(solid_space, case.x, degree)
        - assemble_gradient_load(solid_space, elastic_stress, degree)
        + assemble_load(solid_space, case.lam, degree)
    )

    def constraint_field(points: FloatArray) -> FloatArray:
        mapped = case.xbar(points)
        return case.d(points) - case.u(mapped) + case.x(points)

    constraint = assemble_load(multiplier, constraint_field, degree)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(tests):
        vectors = (
            _test_vectors(rng, velocity, free=True),
            _test_vectors(rng, pressure, free=False),
            _test_vectors(rng, solid_space, free=False),
            _test_vectors(rng, multiplier, free=False),
        )
        norm = float(np.sqrt(sum(float(v @ v) for v in vectors)))
        residual = (
            momentum @ vectors[0]
            + mass @ vectors[1]
            + elastic @ vectors[2]
            + constraint @ vectors[3]
        )
        worst = max(worst, abs(float(residual)) / norm)
    return worst


def check_case(
    case: MMSCase, tolerance: float = MMS_TOLERANCE, seed: int = 0
) -> float:
    """
    Check that the data of a case match its exact fields in the weak form.
    Raises `MMSInconsistent` when the weak residual exceeds `tolerance`.
    """

    residual = weak_residual(case, seed=seed)
    if residual > tolerance:
        raise MMSInconsistent(
            f"Manufactured data has weak residual {residual:.3e}, "
            + f"above the tolerance {tolerance:.1e}"
        )
    LOGGER.info("Manufactured data weak residual %.3e", residual)
    return residual
