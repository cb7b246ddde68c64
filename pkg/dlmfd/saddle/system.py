"""
Block saddle point system of the coupled stationary problem.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import SuperLU, splu

from ..assembly.base import SparseMatrix
from ..assembly.forms import assemble_integrals
from ..fem.space import FEFunction, FESpace
from ..mesh.base import FloatArray, IntArray

LOGGER = logging.getLogger(__name__)

# Relative residual contract of a direct solve
RESIDUAL_TOLERANCE = 1e-10
# Number of iterative refinement sweeps when the contract is missed
REFINEMENT_SWEEPS = 2


class BlockShapeError(ValueError):
    """
    Error indicating that the blocks of a saddle point system do not have
    mutually consistent dimensions.
    """


class SingularSystem(RuntimeError):
    """
    Error indicating that the factorization of a saddle point system failed.
    """

    def __init__(self, message: str, pivot: str | None = None) -> None:
        super().__init__(message)
        self.pivot: str | None = pivot


@dataclass(frozen=True, eq=False)
class SystemBlocks:
    """
    Assembled blocks of the stationary problem and the spaces they act on.

    `fluid` is the fluid operator with any convection already added,
    `divergence` has pressure rows and velocity columns, and the coupling
    blocks have multiplier rows. A solid without coupling has a multiplier
    space with no degrees of freedom and empty coupling blocks.
    """

    velocity: FESpace
    pressure: FESpace
    solid: FESpace
    multiplier: FESpace
    fluid: SparseMatrix
    divergence: SparseMatrix
    solid_operator: SparseMatrix
    fluid_coupling: SparseMatrix
    solid_coupling: SparseMatrix

    @property
    def n_multipliers(self) -> int:
        """
        Retrieve the number of multiplier degrees of freedom in the system.
        """

        return self.fluid_coupling.shape[0]


class SaddleRHS(NamedTuple):
    """
    Right-hand sides of the momentum, solid and constraint equations, and
    optionally of the mass equation.
    """

    u: FloatArray
    x: FloatArray
    lam: FloatArray
    p: FloatArray | None = None


class ResidualReport(NamedTuple):
    """
    Euclidean norms of the residuals of every equation of the system.
    """

    momentum: float
    mass: float
    solid: float
    constraint: float
    # Integral of the pressure, which the mean constraint sets to zero
    mean: float

    @property
    def total(self) -> float:
        """
        Retrieve the norm of the combined residual.
        """

        return float(
            np.sqrt(
                self.momentum**2
                + self.mass**2
                + self.solid**2
                + self.constraint**2
                + self.mean**2
            )
        )


class SaddleSolution(NamedTuple):
    """
    Solution of the saddle point system.
    """

    u: FEFunction
    p: FEFunction
    x: FEFunction
    lam: FEFunction
    # Multiplier of the zero-mean pressure constraint
    m: float
    residuals: ResidualReport
    relative_residual: float


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """
    Global matrix of the saddle point system with homogeneous Dirichlet
    velocity degrees of freedom eliminated, ordered as velocity, pressure,
    solid map, multiplier and the mean pressure multiplier.
    """

    blocks: SystemBlocks
    boundary: IntArray
    free: IntArray
    mean: FloatArray
    matrix: SparseMatrix

    @property
    def sizes(self) -> tuple[int, int, int, int, int]:
        """
        Retrieve the number of unknowns of every block.
        """

        blocks = self.blocks
        return (
            len(self.free),
            blocks.pressure.n_dofs,
            blocks.solid.n_dofs,
            blocks.n_multipliers,
            1,
        )

    @property
    def offsets(self) -> tuple[int, int, int, int, int, int]:
        """
        Retrieve the first global index of every block and the total size.
        """

        starts = np.concatenate(([0], np.cumsum(self.sizes)))
        u, p, x, lam, m, total = (int(start) for start in starts)
        return u, p, x, lam, m, total

    @cached_property
    def factor(self) -> SuperLU:
        """
        Retrieve the sparse LU factorization of the global matrix.
        """

        try:
            return splu(sp.csc_matrix(self.matrix))
        except RuntimeError as error:
            raise SingularSystem(
                f"Factorization of the saddle point system failed: {error}",
                pivot=str(error),
            ) from error

    def pack(self, rhs: SaddleRHS) -> FloatArray:
        """
        Create the global right-hand side vector from the load vectors.
        """

        blocks = self.blocks
        expected = (
            blocks.velocity.n_dofs,
            blocks.solid.n_dofs,
            blocks.n_multipliers,
        )
        shapes = (len(rhs.u), len(rhs.x), len(rhs.lam))
        if shapes != expected:
            raise BlockShapeError(
                f"Right-hand side sizes {shapes} do not match {expected}"
            )
        p = np.zeros(blocks.pressure.n_dofs) if rhs.p is None else rhs.p
        return np.concatenate(
            (np.asarray(rhs.u)[self.free], p, rhs.x, rhs.lam, [0.0])
        )

    def unpack(
        self, vector: FloatArray
    ) -> tuple[FloatArray, FloatArray, FloatArray, FloatArray, float]:
        """
        Split a global vector into full-length velocity, pressure, solid and
        multiplier coefficients and the mean pressure multiplier.
        """

        u0, p0, x0, l0, m0, _ = self.offsets
        u = np.zeros(self.blocks.velocity.n_dofs)
        u[self.free] = vector[u0:p0]
        return (
            u,
            vector[p0:x0].copy(),
            vector[x0:l0].copy(),
            vector[l0:m0].copy(),
            float(vector[m0]),
        )


def _check_shapes(blocks: SystemBlocks) -> None:
    n_u = blocks.velocity.n_dofs
    n_p = blocks.pressure.n_dofs
    n_x = blocks.solid.n_dofs
    n_l = blocks.n_multipliers
    expected = {
        "fluid": (n_u, n_u),
        "divergence": (n_p, n_u),
        "solid_operator": (n_x, n_x),
        "fluid_coupling": (n_l, n_u),
        "solid_coupling": (n_l, n_x),
    }
    for name, shape in expected.items():
        actual = getattr(blocks, name).shape
        if actual != shape:
            raise BlockShapeError(
                f"Block {name} has shape {actual}, expected {shape}"
            )
    if n_l not in (0, blocks.multiplier.n_dofs):
        raise BlockShapeError(
            f"Coupling has {n_l} rows for {blocks.multiplier.n_dofs} "
            + "multiplier degrees of freedom"
        )


def build_system(
    blocks: SystemBlocks, bc: IntArray | None = None
) -> BlockOperator:
    """
    Build the global saddle point matrix. The homogeneous Dirichlet velocity
    degrees of freedom `bc`, which default to the boundary of the velocity
    space, are eliminated symmetrically, and the zero-mean pressure
    constraint is appended as a row and column of pressure basis integrals.
    """

    _check_shapes(blocks)
    boundary = (
        blocks.velocity.boundary_dofs
        if bc is None
        else np.unique(np.asarray(bc, dtype=np.int64))
    )
    mask = np.ones(blocks.velocity.n_dofs, dtype=bool)
    mask[boundary] = False
    free = np.flatnonzero(mask)

    fluid = sp.csr_matrix(blocks.fluid)[free][:, free]
    divergence = sp.csr_matrix(blocks.divergence)[:, free]
    fluid_coupling = sp.csr_matrix(blocks.fluid_coupling)[:, free]
    solid_coupling = sp.csr_matrix(blocks.solid_coupling)
    mean = assemble_integrals(blocks.pressure)
    mean_column = sp.csr_matrix(mean.reshape(-1, 1))

    n_p = blocks.pressure.n_dofs
    n_x = blocks.solid.n_dofs
    n_l = blocks.n_multipliers
    n_u = len(free)

    def zero(rows: int, cols: int) -> SparseMatrix:
        return sp.csr_matrix((rows, cols))

    layout = [
        [fluid, -divergence.T, None, fluid_coupling.T, zero(n_u, 1)],
        [-divergence, zero(n_p, n_p), None, None, mean_column],
        [None, None, blocks.solid_operator, -solid_coupling.T, zero(n_x, 1)],
        [fluid_coupling, None, -solid_coupling, zero(n_l, n_l), None],
        [zero(1, n_u), mean_column.T, zero(1, n_x), zero(1, n_l), zero(1, 1)],
    ]
    matrix = sp.bmat(layout, format="csr")
    LOGGER.debug(
        "Saddle point system with %d unknowns and %d nonzeros",
        matrix.shape[0],
        matrix.nnz,
    )
    return BlockOperator(blocks, boundary, free, mean, sp.csr_matrix(matrix))


def residuals(
    system: BlockOperator,
    sol: SaddleSolution | FloatArray,
    rhs: SaddleRHS,
) -> ResidualReport:
    """
    Compute the norms of the residuals of the momentum, mass, solid and
    constraint equations and of the mean pressure constraint for a solution
    or a global solution vector.
    """

    if isinstance(sol, SaddleSolution):
        vector = np.concatenate(
            (
                sol.u.coefficients[system.free],
                sol.p.coefficients,
                sol.x.coefficients,
                sol.lam.coefficients[: system.blocks.n_multipliers],
                [sol.m],
            )
        )
    else:
        vector = np.asarray(sol, dtype=float)
    residual = system.pack(rhs) - system.matrix @ vector
    u0, p0, x0, l0, m0, _ = system.offsets
    return ResidualReport(
        momentum=float(np.linalg.norm(residual[u0:p0])),
        mass=float(np.linalg.norm(residual[p0:x0])),
        solid=float(np.linalg.norm(residual[x0:l0])),
        constraint=float(np.linalg.norm(residual[l0:m0])),
        mean=float(abs(residual[m0])),
    )


def solve(
    system: BlockOperator,
    rhs: SaddleRHS,
    tolerance: float = RESIDUAL_TOLERANCE,
) -> SaddleSolution:
    """
    Solve the saddle point system by sparse LU factorization.

    At most two sweeps of iterative refinement are applied when the relative
    residual exceeds `tolerance`, which is logged if it remains exceeded.
    Raises `SingularSystem` when the factorization fails or yields
    non-finite values.
    """

    vector = system.pack(rhs)
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        solution = np.zeros_like(vector)
    else:
        factor = system.factor
        solution = factor.solve(vector)
        for _ in range(REFINEMENT_SWEEPS):
            if not np.all(np.isfinite(solution)):
                break
            defect = vector - system.matrix @ solution
            if np.linalg.norm(defect) <= tolerance * norm:
                break
            solution = solution + factor.solve(defect)
    if not np.all(np.isfinite(solution)):
        raise SingularSystem(
            "Saddle point solve produced non-finite values", pivot="nan"
        )

    report = residuals(system, solution, rhs)
    relative = report.total / norm if norm > 0.0 else report.total
    if relative > tolerance:
        LOGGER.warning(
            "Relative residual %.3e exceeds the solver tolerance %.1e",
            relative,
            tolerance,
        )
    else:
        LOGGER.info("Solved saddle point system, residual %.3e", relative)

    blocks = system.blocks
    u, p, x, lam, m = system.unpack(solution)
    if len(lam) != blocks.multiplier.n_dofs:
        lam = np.zeros(blocks.multiplier.n_dofs)
    return SaddleSolution(
        u=FEFunction(blocks.velocity, u),
        p=FEFunction(blocks.pressure, p),
        x=FEFunction(blocks.solid, x),
        lam=FEFunction(blocks.multiplier, lam),
        m=m,
        residuals=report,
        relative_residual=relative,
    )
