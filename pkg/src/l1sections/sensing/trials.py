# src/l1sections/sensing/trials.py
"""Seeded sparse-recovery experiments against a fixed encoder."""
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.optimize import isotonic_regression

from ..exceptions import DomainError
from ..types import CurvePoint, RecoveryReport
from ..utils.concurrency import run_parallel_tasks
from .basis_pursuit import DEFAULT_METHODS, Encoder, as_dense, basis_pursuit, sigma_k

logger = logging.getLogger(__name__)

SUCCESS_TOLERANCE = 1e-6
RATE_LEVEL = 0.99


def draw_signal(N: int, s: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform support of size s, values +-(1 + U[0, 1])."""
    x = np.zeros(N)
    if s == 0:
        return x
    support = rng.choice(N, size=s, replace=False)
    signs = np.where(rng.random(s) < 0.5, -1.0, 1.0)
    x[support] = signs * (1.0 + rng.random(s))
    return x


def dense_perturbation(N: int, mass: float, rng: np.random.Generator) -> np.ndarray:
    """Dense vector with l1 norm exactly `mass`."""
    e = rng.uniform(-1.0, 1.0, N)
    total = float(np.abs(e).sum())
    return e * (mass / total) if total > 0 else e


def recovery_trial(
    M: Encoder,
    s: int,
    noise_level: float = 0.0,
    seed: int = 0,
    trial: int = 0,
    tol_feas: float = 1e-8,
    tol_opt: float = 1e-7,
    methods: Sequence[str] = DEFAULT_METHODS,
) -> RecoveryReport:
    """Draw x, encode y = M x, decode by basis pursuit and compare; the stream is SeedSequence([seed, s, trial])."""
    A = as_dense(M)
    N = A.shape[1]
    if not 0 <= s <= N:
        raise DomainError(f"support size {s} outside [0, {N}]")
    if noise_level < 0:
        raise DomainError(f"noise level must be non-negative, got {noise_level}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, s, trial]))
    x = draw_signal(N, s, rng)
    if noise_level > 0:
        x = x + dense_perturbation(N, noise_level, rng)
    y = A @ x
    result = basis_pursuit(A, y, tol_feas=tol_feas, tol_opt=tol_opt, methods=methods)
    error = float(np.linalg.norm(x - result.v))
    norm = float(np.linalg.norm(x))
    relative = error / norm if norm > 0 else error
    sigma = float(sigma_k(x, s))
    ratio = error * math.sqrt(s) / sigma if sigma > 0 and s > 0 else None
    return RecoveryReport(
        support_size=s,
        success=relative <= SUCCESS_TOLERANCE,
        relative_error=relative,
        sigma_k=sigma,
        stability_ratio=ratio,
        residual=result.residual,
        objective=result.objective,
        seed=seed,
    )


@dataclass(frozen=True)
class RecoveryCurve:
    points: List[CurvePoint]
    smoothed: List[float]
    seed: int

    def largest_reliable(self, level: float = RATE_LEVEL) -> Optional[int]:
        """Largest s whose smoothed success rate is at least `level`."""
        reliable = [p.s for p, rate in zip(self.points, self.smoothed) if rate >= level - 1e-12]
        return max(reliable) if reliable else None


def _trial_success(A, s, noise_level, seed, trial, tol_feas, tol_opt, methods) -> bool:
    return recovery_trial(A, s, noise_level, seed, trial, tol_feas, tol_opt, methods).success


def recovery_curve(
    M: Encoder,
    s_grid: Iterable[int],
    trials: int,
    seed: int = 0,
    noise_level: float = 0.0,
    workers: int = 1,
    tol_feas: float = 1e-8,
    tol_opt: float = 1e-7,
    methods: Sequence[str] = DEFAULT_METHODS,
) -> RecoveryCurve:
    """
    Success counts per support size, plus the nonincreasing isotonic fit of
    the rates. Every trial has its own seed substream, so the counts do not
    depend on the number of workers.
    """
    if trials < 1:
        raise DomainError("empty experiment: trials must be at least 1")
    grid = sorted(set(int(s) for s in s_grid))
    A = as_dense(M)
    tasks = [
        (_trial_success, (A, s, noise_level, seed, trial, tol_feas, tol_opt, methods))
        for s in grid
        for trial in range(trials)
    ]
    outcomes = run_parallel_tasks(tasks, workers)
    points = []
    for i, s in enumerate(grid):
        successes = sum(outcomes[i * trials:(i + 1) * trials])
        points.append(CurvePoint(s=s, trials=trials, successes=successes))
        logger.debug(f"recovery_curve: s={s}: {successes}/{trials}")
    if points:
        rates = np.array([p.rate for p in points])
        smoothed = [float(np.clip(r, 0.0, 1.0)) for r in isotonic_regression(rates, increasing=False).x]
    else:
        smoothed = []
    curve = RecoveryCurve(points=points, smoothed=smoothed, seed=seed)
    logger.info(f"Recovery curve over {len(grid)} sizes x {trials} trials; reliable up to s={curve.largest_reliable()}")
    return curve
