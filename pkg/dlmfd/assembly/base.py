"""
Shared assembly types and the element loop.
"""

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp
from typing_extensions import Self

from ..fem.space import FEFunction, FESpace
from ..mesh.base import FloatArray, IntArray

LOGGER = logging.getLogger(__name__)

SparseMatrix = sp.csr_matrix
Triplets = tuple[IntArray, IntArray, FloatArray]
Kernel = Callable[[IntArray], Triplets]
Variant = Literal["L2", "H1"]


@dataclass(frozen=True)
class ModelParams:
    """
    Coefficients of the stationary problem together with the physical
    quantities they derive from when the problem is one time step.
    """

    alpha: float
    beta: float
    gamma: float
    nu: float
    rho_f: float = 1.0
    rho_s: float = 1.0
    kappa: float = 1.0
    dt: float = 1.0

    def __post_init__(self) -> None:
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.beta >= 0.0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.nu > 0.0:
            raise ValueError(f"nu must be positive, got {self.nu}")

    @classmethod
    def from_physics(
        cls, rho_f: float, rho_s: float, nu: float, kappa: float, dt: float
    ) -> Self:
        """
        Derive the coefficients of one semi-implicit time step with step
        size `dt` from the densities, viscosity and elasticity modulus.
        """

        if not dt > 0.0:
            raise ValueError(f"Time step must be positive, got {dt}")
        return cls(
            alpha=rho_f / dt,
            beta=(rho_s - rho_f) / dt,
            gamma=kappa * dt,
            nu=nu,
            rho_f=rho_f,
            rho_s=rho_s,
            kappa=kappa,
            dt=dt,
        )

    @property
    def delta_rho(self) -> float:
        """
        Retrieve the excess density of the solid over the fluid.
        """

        return self.rho_s - self.rho_f


@dataclass(frozen=True, eq=False)
class CouplingConfig:
    """
    Choice of coupling form and the solid map at which the fluid test
    functions are composed.
    """

    variant: Variant
    codim: int
    xbar: FEFunction
    quad_degree: int = 5

    def __post_init__(self) -> None:
        if self.variant not in ("L2", "H1"):
            raise ValueError(f"Unknown coupling variant {self.variant!r}")
        if self.codim not in (0, 1):
            raise ValueError(f"Codimension must be 0 or 1, got {self.codim}")
        if self.variant == "H1" and self.codim != 0:
            raise ValueError("The H1 coupling requires a thick solid")
        mesh_codim = getattr(self.xbar.space.mesh, "codim", 0)
        if mesh_codim != self.codim:
            raise ValueError(
                f"Solid map lives on a mesh of codimension {mesh_codim}, "
                + f"not {self.codim}"
            )

    def moved(self, xbar: FEFunction) -> Self:
        """
        Create the same coupling configuration at another solid map.
        """

        return type(self)(self.variant, self.codim, xbar, self.quad_degree)


def default_degree(space: FESpace) -> int:
    """
    Retrieve a quadrature degree that integrates products of two basis
    functions of the space with one order to spare.
    """

    return 2 * space.element.degree + 1


def local_triplets(
    row_map: IntArray, col_map: IntArray, local: FloatArray
) -> Triplets:
    """
    Expand local matrices of cells, indexed by cell, local row and local
    column, into triplets using the global indices of the rows and columns.
    """

    rows = np.broadcast_to(row_map[:, :, np.newaxis], local.shape)
    cols = np.broadcast_to(col_map[:, np.newaxis, :], local.shape)
    return rows.ravel(), cols.ravel(), local.ravel()


def element_loop(
    kernel: Kernel,
    n_cells: int,
    shape: tuple[int, int],
    workers: int = 1,
) -> SparseMatrix:
    """
    Run `kernel` on contiguous chunks of cells and collect its triplets into
    a compressed sparse matrix of `shape`.

    With more than one worker the chunks are computed by a thread pool. The
    triplet buffers are merged in chunk order, so duplicate entries are
    summed in the same order for a fixed worker count.
    """

    chunks = [
        chunk
        for chunk in np.array_split(np.arange(n_cells), max(1, workers))
        if len(chunk) > 0
    ]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            buffers = list(pool.map(kernel, chunks))
    else:
        buffers = [kernel(chunk) for chunk in chunks]

    if not buffers:
        return sp.csr_matrix(shape)
    rows = np.concatenate([buffer[0] for buffer in buffers])
    cols = np.concatenate([buffer[1] for buffer in buffers])
    values = np.concatenate([buffer[2] for buffer in buffers])
    matrix = sp.coo_matrix((values, (rows, cols)), shape=shape).tocsr()
    matrix.sum_duplicates()
    return matrix


def vector_block(local: FloatArray, n_components: int) -> FloatArray:
    """
    Repeat local matrices of a scalar form on the diagonal blocks of the
    components of a vector space, following the component-blocked local
    ordering of the degrees of freedom.
    """

    n_cells, n_rows, n_cols = local.shape
    eye = np.eye(n_components)
    return np.einsum("ab,kij->kaibj", eye, local).reshape(
        n_cells, n_components * n_rows, n_components * n_cols
    )
