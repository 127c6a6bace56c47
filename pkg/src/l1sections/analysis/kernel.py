# src/l1sections/analysis/kernel.py
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from ..constants import KERNEL_RESIDUAL_TOLERANCE, RANK_TOLERANCE, SVD_TOLERANCE
from ..exceptions import NumericalGuardError, VerificationError
from ..tanner.check_matrix import SignCheckMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class KernelBasis:
    """Orthonormal basis of X = ker(A), one column per basis vector."""

    N: int
    vectors: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    def project(self, x: np.ndarray) -> np.ndarray:
        """Orthogonal projection onto X (columns of x are projected independently)."""
        return self.vectors @ (self.vectors.T @ x)

    def contains(self, x: np.ndarray, tol: float = KERNEL_RESIDUAL_TOLERANCE) -> bool:
        x = np.asarray(x, dtype=np.float64)
        scale = max(float(np.linalg.norm(x)), 1.0)
        return float(np.linalg.norm(x - self.project(x))) <= tol * scale


def dense_rank(matrix: np.ndarray) -> int:
    """Number of singular values above RANK_TOLERANCE times the largest."""
    if matrix.size == 0:
        return 0
    values = np.linalg.svd(np.asarray(matrix, dtype=np.float64), compute_uv=False)
    if values.size == 0 or values[0] == 0:
        return 0
    return int(np.sum(values > RANK_TOLERANCE * values[0]))


def kernel_basis(A: SignCheckMatrix, max_n: int = 4096) -> KernelBasis:
    if A.cols > max_n:
        raise NumericalGuardError(f"kernel basis needs N <= {max_n} (dense factorization), got N={A.cols}")
    if A.rows == 0:
        return KernelBasis(A.cols, np.eye(A.cols))
    dense = A.to_dense().astype(np.float64)
    vectors = null_space(dense, rcond=RANK_TOLERANCE)
    dim = vectors.shape[1]
    gram_error = float(np.abs(vectors.T @ vectors - np.eye(dim)).max()) if dim else 0.0
    if gram_error > SVD_TOLERANCE:
        raise VerificationError(f"kernel basis is not orthonormal (error {gram_error:.2e})")
    residual = float(np.abs(dense @ vectors).max()) if dim else 0.0
    if residual > KERNEL_RESIDUAL_TOLERANCE * max(A.rows, 1):
        raise VerificationError(f"kernel basis residual {residual:.2e} too large")
    logger.debug(f"kernel_basis: {A.rows}x{A.cols} matrix, kernel dimension {dim}")
    return KernelBasis(A.cols, vectors)
