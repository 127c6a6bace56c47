# src/l1sections/analysis/distortion.py
import logging
import math
from typing import Optional

import numpy as np

from ..constants import KERNEL_RESIDUAL_TOLERANCE
from ..exceptions import VerificationError
from ..types import DistortionBound
from .kernel import KernelBasis

logger = logging.getLogger(__name__)

_COLUMN_BLOCK = 512


def distortion_ratio(x: np.ndarray) -> np.ndarray:
    """sqrt(N) |x|_2 / |x|_1 per column (0 for zero columns)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64).T).T
    n = x.shape[0]
    l1 = np.abs(x).sum(axis=0)
    l2 = np.linalg.norm(x, axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(l1 > 0, math.sqrt(n) * l2 / l1, 0.0)
    return ratio


def sign_shrink(x: np.ndarray) -> np.ndarray:
    """Soft threshold at the median magnitude; concentrates mass on the largest entries."""
    threshold = float(np.median(np.abs(x)))
    return np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)


class _Best:
    def __init__(self):
        self.ratio = 0.0
        self.vector: Optional[np.ndarray] = None

    def offer(self, candidates: np.ndarray) -> None:
        if candidates.size == 0:
            return
        ratios = distortion_ratio(candidates)
        j = int(np.argmax(ratios))
        if ratios[j] > self.ratio:
            self.ratio = float(ratios[j])
            self.vector = candidates[:, j].copy()


def distortion_lower_bound(B: KernelBasis, budget: int = 2000, seed: int = 0,
                           refinements: int = 20) -> DistortionBound:
    """
    Best witnessed sqrt(N)|x|_2/|x|_1 over x in X. Candidates: projections of
    the coordinate vectors, projections of random s-sparse vectors for
    s = 1, 2, 4, ..., and repeated project(sign_shrink(x)) from the best few.
    """
    N = B.N
    if B.dim == 0:
        return DistortionBound(N=N, trail=("distortion-search(empty subspace)",))
    rng = np.random.default_rng(seed)
    best = _Best()
    tops = []

    for start in range(0, N, _COLUMN_BLOCK):
        stop = min(start + _COLUMN_BLOCK, N)
        cols = B.vectors @ B.vectors[start:stop].T  # projections of e_start..e_stop
        best.offer(cols)
        ratios = distortion_ratio(cols)
        tops.extend((float(r), start + i) for i, r in enumerate(ratios))

    sparsities = [1 << i for i in range(int(math.log2(N)) + 1)]
    per_level = max(1, budget // len(sparsities))
    for s in sparsities:
        draws = np.zeros((N, per_level))
        for j in range(per_level):
            support = rng.choice(N, size=s, replace=False)
            draws[support, j] = rng.standard_normal(s)
        best.offer(B.project(draws))

    seeds = [B.project(np.eye(N)[:, i]) for _, i in sorted(tops, reverse=True)[:4]]
    if best.vector is not None:
        seeds.append(best.vector)
    for x in seeds:
        for _ in range(refinements):
            shrunk = sign_shrink(x)
            if not np.any(shrunk):
                break
            x = B.project(shrunk)
            norm = np.linalg.norm(x)
            if norm == 0:
                break
            x = x / norm
            best.offer(x[:, None])

    witness = best.vector
    if witness is None or best.ratio == 0.0:
        return DistortionBound(N=N, trail=("distortion-search(no witness)",))
    if not B.contains(witness, KERNEL_RESIDUAL_TOLERANCE):
        raise VerificationError("distortion witness is not in the subspace")
    witness = witness / np.linalg.norm(witness)
    lower = max(best.ratio, 1.0)
    logger.debug(f"distortion_lower_bound: N={N}, dim={B.dim}, lower={lower:.6f}")
    return DistortionBound(
        N=N, lower=lower, witness=tuple(witness.tolist()),
        trail=(f"distortion-search(budget={budget},seed={seed},refinements={refinements})",),
    )


def distortion_sandwich(lower: DistortionBound, upper: Optional[DistortionBound]) -> DistortionBound:
    """Joins a witnessed lower bound with a certified upper bound."""
    if upper is None or upper.upper is None:
        return lower
    return DistortionBound(
        N=lower.N, lower=lower.lower, witness=lower.witness, upper=upper.upper,
        trail=lower.trail + upper.trail,
    )
