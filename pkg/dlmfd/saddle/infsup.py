"""
Numerical estimation of discrete inf-sup constants of the coupling.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..assembly.base import SparseMatrix
from ..assembly.forms import assemble_h1_gram, assemble_mass
from ..fem.space import FESpace
from ..mesh.base import FloatArray

LOGGER = logging.getLogger(__name__)


class EigenFailure(RuntimeError):
    """
    Error indicating that the generalized eigenvalue problem of an inf-sup
    estimate could not be solved.
    """


class InfSupOperands(NamedTuple):
    """
    Coupling blocks and norm matrices of an inf-sup estimate.
    """

    fluid_coupling: SparseMatrix
    solid_coupling: SparseMatrix
    norm_v: SparseMatrix
    norm_s: SparseMatrix
    norm_lambda: FloatArray


def _dense(matrix: SparseMatrix | FloatArray) -> FloatArray:
    if sp.issparse(matrix):
        return np.asarray(matrix.toarray(), dtype=float)
    return np.asarray(matrix, dtype=float)


def estimate_infsup(
    fluid_coupling: SparseMatrix | FloatArray,
    solid_coupling: SparseMatrix | FloatArray,
    norm_v: SparseMatrix | FloatArray,
    norm_s: SparseMatrix | FloatArray,
    norm_lambda: SparseMatrix | FloatArray,
) -> float:
    """
    Estimate the discrete inf-sup constant of the constraint operator
    `C = [C_f, -C_s]` as the square root of the smallest eigenvalue of the
    generalized problem `(C N^-1 C^T) q = lambda M q`, where `N` is the
    block diagonal of the norm matrices of the velocity and solid spaces and
    `M` is the norm matrix of the multiplier space.
    """

    n_v = norm_v.shape[0]
    n_s = norm_s.shape[0]
    n_l = norm_lambda.shape[0]
    if fluid_coupling.shape != (n_l, n_v):
        raise ValueError(
            f"Fluid coupling shape {fluid_coupling.shape} does not match "
            + f"norms of sizes {n_l} and {n_v}"
        )
    if solid_coupling.shape != (n_l, n_s):
        raise ValueError(
            f"Solid coupling shape {solid_coupling.shape} does not match "
            + f"norms of sizes {n_l} and {n_s}"
        )

    constraint = sp.hstack(
        (sp.csr_matrix(fluid_coupling), -sp.csr_matrix(solid_coupling)),
        format="csr",
    )
    norm = sp.block_diag((norm_v, norm_s), format="csc")
    try:
        riesz = splu(norm).solve(_dense(constraint.T))
    except RuntimeError as error:
        raise EigenFailure(f"Norm matrix is singular: {error}") from error
    schur = _dense(constraint @ riesz)
    schur = 0.5 * (schur + schur.T)
    metric = _dense(norm_lambda)
    metric = 0.5 * (metric + metric.T)
    try:
        eigenvalues = scipy.linalg.eigh(
            schur, metric, eigvals_only=True, subset_by_index=[0, 0]
        )
    except (scipy.linalg.LinAlgError, ValueError) as error:
        raise EigenFailure(f"Eigenvalue solve failed: {error}") from error
    smallest = float(eigenvalues[0])
    if not np.isfinite(smallest):
        raise EigenFailure("Eigenvalue solve produced non-finite values")
    beta = float(np.sqrt(max(smallest, 0.0)))
    LOGGER.debug("Inf-sup estimate %.6g from %d multipliers", beta, n_l)
    return beta


def multiplier_norm(
    solid: FESpace, solid_coupling: SparseMatrix, codim: int
) -> FloatArray:
    """
    Build the norm matrix of the multiplier space.

    Thick solids use the dual norm of the coupling functional, realized by
    the inverse of the H1 Gram matrix of the solid space. Thin solids use
    the L2 Gram matrix scaled by the mesh size of the curve, `h_s * M`, so
    that the norm of a multiplier is `h_s^(1/2) ||mu||_L2`: the mesh
    dependent stand-in for the dual norm of H^(1/2) on the curve. The
    estimate of the constant is then the square root of the smallest
    eigenvalue with this weighted metric, without a further `h_s` factor.
    """

    if codim == 1:
        return _dense(assemble_mass(solid)) * solid.mesh.h
    gram = sp.csc_matrix(assemble_h1_gram(solid))
    coupling = _dense(solid_coupling)
    try:
        riesz = splu(gram).solve(coupling.T)
    except RuntimeError as error:
        raise EigenFailure(f"Gram matrix is singular: {error}") from error
    return coupling @ riesz


def infsup_operands(
    velocity: FESpace,
    solid: FESpace,
    fluid_coupling: SparseMatrix,
    solid_coupling: SparseMatrix,
    codim: int,
) -> InfSupOperands:
    """
    Collect the operands of an inf-sup estimate: the coupling blocks with
    the boundary velocity degrees of freedom removed, H1 Gram matrices of
    the velocity and solid spaces, and the multiplier norm matrix.
    """

    free = velocity.free_dofs
    gram_v = sp.csr_matrix(assemble_h1_gram(velocity))[free][:, free]
    return InfSupOperands(
        sp.csr_matrix(fluid_coupling)[:, free],
        sp.csr_matrix(solid_coupling),
        gram_v,
        assemble_h1_gram(solid),
        multiplier_norm(solid, solid_coupling, codim),
    )
