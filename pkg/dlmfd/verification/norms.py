"""
Error norms of discrete solutions against exact fields.
"""

from typing import NamedTuple, Protocol

import numpy as np
from scipy.sparse.linalg import splu

from ..assembly.forms import assemble_h1_gram, assemble_mass
from ..assembly.loads import assemble_load
from ..fem.quadrature import quadrature
from ..fem.space import FEFunction, FESpace, Field
from ..mesh.base import FloatArray
from .mms import GradientField, MMSCase


class ErrorNorms(NamedTuple):
    """
    Errors of the velocity, pressure, solid map and multiplier.
    """

    u_h1: float
    u_l2: float
    p_l2: float
    x_h1: float
    # Solid H1 norm of the Riesz representative of the multiplier error
    lam_proxy: float
    lam_l2: float

    @property
    def combined(self) -> float:
        """
        Retrieve the sum of the errors in the norms of the stability
        estimate.
        """

        return self.u_h1 + self.p_l2 + self.x_h1 + self.lam_proxy


NORM_NAMES = ("u_h1", "u_l2", "p_l2", "x_h1", "lam_proxy", "lam_l2")


class Solution(Protocol):
    """
    Discrete velocity, pressure, solid map and multiplier.
    """

    @property
    def u(self) -> FEFunction: ...
    @property
    def p(self) -> FEFunction: ...
    @property
    def x(self) -> FEFunction: ...
    @property
    def lam(self) -> FEFunction: ...


def norm_degree(space: FESpace) -> int:
    """
    Retrieve the quadrature degree of error integrals in a space.
    """

    return 2 * space.element.degree + 4


def field_errors(
    function: FEFunction,
    exact: Field,
    gradient: GradientField | None = None,
    degree: int | None = None,
) -> tuple[float, float]:
    """
    Compute the L2 error and, when the exact gradient is given, the H1 error
    of a discrete function. Without a gradient, the second value is zero.
    """

    space = function.space
    rule = quadrature(
        norm_degree(space) if degree is None else degree,
        space.mesh.cell_kind,
    )
    tab = space.tabulate(rule)
    n_cells, n_points = tab.weights.shape
    local = function.nodal_values[space.cell_dofs]
    values = np.einsum("qi,kic->kqc", tab.values, local)
    points = tab.points.reshape(-1, 2)
    difference = values - np.asarray(exact(points), dtype=float).reshape(
        n_cells, n_points, space.n_components
    )
    l2_squared = float(
        np.einsum("kq,kqc,kqc->", tab.weights, difference, difference)
    )
    if gradient is None:
        return float(np.sqrt(l2_squared)), 0.0

    grads = np.einsum("kqid,kic->kqcd", tab.gradients, local)
    dim = tab.gradients.shape[-1]
    grad_difference = grads - np.asarray(
        gradient(points), dtype=float
    ).reshape(n_cells, n_points, space.n_components, dim)
    semi_squared = float(
        np.einsum(
            "kq,kqcd,kqcd->", tab.weights, grad_difference, grad_difference
        )
    )
    return (
        float(np.sqrt(l2_squared)),
        float(np.sqrt(l2_squared + semi_squared)),
    )


def multiplier_errors(
    lam: FEFunction, exact: Field, degree: int | None = None
) -> tuple[float, float]:
    """
    Compute the dual norm proxy and the L2 error of a multiplier.

    The proxy is the solid H1 norm of the Riesz representative `r` in the
    multiplier space with `(r, Y)_1 = (exact - lam, Y)_0` for all `Y`.
    """

    space = lam.space
    if degree is None:
        degree = norm_degree(space)
    gram = assemble_h1_gram(space, degree)
    load = (
        assemble_load(space, exact, degree)
        - assemble_mass(space, degree) @ lam.coefficients
    )
    riesz = splu(gram.tocsc()).solve(load)
    proxy = float(np.sqrt(max(float(riesz @ (gram @ riesz)), 0.0)))
    l2, _ = field_errors(lam, exact, degree=degree)
    return proxy, l2


def error_norms(sol: Solution, case: MMSCase) -> ErrorNorms:
    """
    Compute the errors of a discrete solution of a manufactured case.
    """

    u_l2, u_h1 = field_errors(sol.u, case.u, case.grad_u)
    p_l2, _ = field_errors(sol.p, case.p)
    _, x_h1 = field_errors(sol.x, case.x, case.grad_x)
    lam_proxy, lam_l2 = multiplier_errors(sol.lam, case.lam)
    return ErrorNorms(
        u_h1=u_h1,
        u_l2=u_l2,
        p_l2=p_l2,
        x_h1=x_h1,
        lam_proxy=lam_proxy,
        lam_l2=lam_l2,
    )


def as_array(norms: ErrorNorms) -> FloatArray:
    """
    Convert error norms to an array in the order of `NORM_NAMES`.
    """

    return np.array([getattr(norms, name) for name in NORM_NAMES])
