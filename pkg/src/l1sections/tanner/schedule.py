# src/l1sections/tanner/schedule.py
import logging
import math

from ..exceptions import DomainError
from ..types import AssemblySchedule

logger = logging.getLogger(__name__)


def clamped_loglog(N: int) -> float:
    """max(log2 log2 N, 1); keeps eta/(loglog N)^2 finite for small N."""
    if N < 2:
        return 1.0
    inner = math.log2(N)
    return max(math.log2(inner), 1.0) if inner > 1 else 1.0


def schedule_point(N: int, epsilon: float, beta0: float, i: int) -> float:
    """t_i = N (epsilon/N)^((1-beta0)^i)."""
    return N * (epsilon / N) ** ((1 - beta0) ** i)


def build_schedule(
    N: int,
    eta: float,
    beta0: float = 0.05,
    epsilon: float = 1 / 16,
    delta: float = 0.25,
    max_levels: int = 1000,
) -> AssemblySchedule:
    """
    Points t_0 = epsilon < t_1 < ... < t_r, appended until the last one reaches
    delta * eta_tilde^(2 beta0/3) * N, with eta_tilde = eta / loglog(N)^2.
    """
    if not 0 < eta <= 1:
        raise DomainError(f"eta must lie in (0, 1], got {eta}")
    if not 0 < beta0 < 1:
        raise DomainError(f"beta0 must lie in (0, 1), got {beta0}")
    if not 0 < epsilon < N:
        raise DomainError(f"schedule constant epsilon={epsilon} must lie in (0, N)")
    loglog = clamped_loglog(N)
    eta_tilde = eta / (loglog * loglog)
    threshold = delta * eta_tilde ** (2 * beta0 / 3) * N
    points = [epsilon]
    while points[-1] < threshold:
        if len(points) > max_levels:
            raise DomainError(f"schedule did not reach {threshold:g} within {max_levels} levels")
        points.append(schedule_point(N, epsilon, beta0, len(points)))
    logger.debug(f"Schedule for N={N}: r={len(points) - 1}, threshold={threshold:g}, eta_tilde={eta_tilde:.4g}")
    return AssemblySchedule(
        N=N, eta=eta, eta_tilde=eta_tilde, beta0=beta0, epsilon=epsilon, delta=delta, points=points,
    )
