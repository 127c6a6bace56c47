# src/l1sections/sensing/basis_pursuit.py
import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.optimize import linprog
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from ..constants import RANK_TOLERANCE
from ..exceptions import DomainError, InfeasibleMeasurementError, SolverError
from ..tanner.check_matrix import SignCheckMatrix

logger = logging.getLogger(__name__)

DEFAULT_METHODS = ("highs-ds", "highs-ipm", "highs")
SUPPORT_CUTOFF = 1e-9

Encoder = Union[SignCheckMatrix, np.ndarray]


@dataclass(frozen=True)
class BasisPursuitResult:
    v: np.ndarray
    objective: float
    residual: float
    method: str
    rows_used: int


def as_dense(M: Encoder) -> np.ndarray:
    if isinstance(M, SignCheckMatrix):
        return M.to_dense().astype(np.float64)
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise DomainError(f"encoder must be two-dimensional, got shape {A.shape}")
    return A


def independent_rows(A: np.ndarray) -> np.ndarray:
    """Indices of a maximal independent set of rows, from column-pivoted QR of A^T."""
    if A.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    _, R, pivots = scipy.linalg.qr(A.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0:
        return np.zeros(0, dtype=np.int64)
    rank = int(np.sum(diag > RANK_TOLERANCE * diag[0]))
    return np.sort(pivots[:rank])


def _solve_lp(A: np.ndarray, y: np.ndarray, method: str, tol_feas: float, tol_opt: float) -> np.ndarray:
    """min sum(u) s.t. -u <= v <= u, A v = y over (v, u)."""
    k, N = A.shape
    identity = sp.identity(N, format="csr")
    A_ub = sp.vstack([sp.hstack([identity, -identity]), sp.hstack([-identity, -identity])], format="csr")
    b_ub = np.zeros(2 * N)
    A_eq = sp.hstack([sp.csr_matrix(A), sp.csr_matrix((k, N))], format="csr")
    c = np.concatenate([np.zeros(N), np.ones(N)])
    bounds = [(None, None)] * N + [(0, None)] * N
    options = {"primal_feasibility_tolerance": tol_feas, "dual_feasibility_tolerance": tol_opt}
    result = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=y, bounds=bounds, method=method, options=options)
    if not result.success or result.x is None:
        raise SolverError(f"linprog ({method}) status {result.status}: {result.message}")
    return result.x[:N]


def _refit_on_support(A: np.ndarray, y: np.ndarray, v: np.ndarray, tol_feas: float,
                      tol_opt: float = 1e-7) -> np.ndarray:
    """
    Least-squares polish of v on its own support. Kept only if it still solves
    A v = y and does not raise |v|_1; on a rank-deficient support the
    minimum-norm solution can leave the LP optimum.
    """
    peak = float(np.max(np.abs(v))) if v.size else 0.0
    if peak == 0.0:
        return v
    support = np.flatnonzero(np.abs(v) > SUPPORT_CUTOFF * peak)
    if support.size > A.shape[0]:
        return v
    coef, *_ = scipy.linalg.lstsq(A[:, support], y)
    refit = np.zeros_like(v)
    refit[support] = coef
    if np.max(np.abs(A @ refit - y), initial=0.0) > tol_feas * max(1.0, float(np.max(np.abs(y)))):
        return v
    l1 = float(np.sum(np.abs(v)))
    if float(np.sum(np.abs(refit))) > l1 + tol_opt * max(1.0, l1):
        logger.debug("Support refit would raise the l1 norm; keeping the LP solution")
        return v
    return refit


def basis_pursuit(
    M: Encoder,
    y: np.ndarray,
    tol_feas: float = 1e-8,
    tol_opt: float = 1e-7,
    methods: Sequence[str] = DEFAULT_METHODS,
) -> BasisPursuitResult:
    """
    argmin |v|_1 subject to M v = y.

    Dependent rows are removed first. A y outside the range of M raises
    InfeasibleMeasurementError; a solver that fails on every configured
    HiGHS method raises SolverError.
    """
    A = as_dense(M)
    y = np.asarray(y, dtype=np.float64).ravel()
    k, N = A.shape
    if y.shape[0] != k:
        raise DomainError(f"measurement has length {y.shape[0]}, encoder has {k} rows")
    if not methods:
        raise DomainError("no LP method configured")
    if not np.any(y):
        return BasisPursuitResult(v=np.zeros(N), objective=0.0, residual=0.0, method="trivial", rows_used=0)

    scale = max(1.0, float(np.max(np.abs(y))))
    keep = independent_rows(A)
    A_red, y_red = A[keep], y[keep]
    z, *_ = scipy.linalg.lstsq(A_red, y_red)
    floor = float(np.max(np.abs(A @ z - y)))
    if floor > tol_feas * scale:
        raise InfeasibleMeasurementError(f"y is not in the range of M: residual floor {floor:.3e} > {tol_feas:g}")

    methods = list(methods)
    retrying = Retrying(
        stop=stop_after_attempt(len(methods)),
        retry=retry_if_exception_type(SolverError),
        before_sleep=lambda state: logger.warning(
            f"LP method {methods[state.attempt_number - 1]} failed "
            f"({state.outcome.exception()}); trying {methods[state.attempt_number]}"
        ),
    )
    method = methods[0]
    try:
        for attempt in retrying:
            with attempt:
                method = methods[attempt.retry_state.attempt_number - 1]
                v = _solve_lp(A_red, y_red, method, tol_feas, tol_opt)
    except RetryError as e:
        raise SolverError(f"basis pursuit did not converge with any of {methods}") from e

    v = _refit_on_support(A, y, v, tol_feas, tol_opt)
    residual = float(np.max(np.abs(A @ v - y)))
    if residual > tol_feas * scale:
        raise SolverError(f"basis pursuit residual {residual:.3e} exceeds tolerance {tol_feas:g}")
    objective = float(np.sum(np.abs(v)))
    logger.debug(f"basis_pursuit: {len(keep)}/{k} rows, N={N}, method={method}, objective={objective:.6g}")
    return BasisPursuitResult(v=v, objective=objective, residual=residual, method=method, rows_used=len(keep))


def sigma_k(x, k: int):
    """
    Best k-term l1 approximation error: the sum of the N - k smallest |x_i|.
    Lists of ints or Fractions are summed exactly.
    """
    N = len(x)
    if k < 0:
        raise DomainError(f"k must be non-negative, got {k}")
    if isinstance(x, np.ndarray):
        if k >= N:
            return x.dtype.type(0) if x.size else 0.0
        return np.sort(np.abs(x))[: N - k].sum()
    if k >= N:
        return 0
    return sum(sorted(abs(v) for v in x)[: N - k])
