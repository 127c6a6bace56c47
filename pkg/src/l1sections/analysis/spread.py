# src/l1sections/analysis/spread.py
"""Spread of a subspace: eps(t) = min over |S| <= t of sigma_min(B with rows S removed).

For an orthonormal basis B, sigma_min(B_rest)^2 = 1 - lambda_max(B_S B_S^T),
an |S| x |S| eigenproblem, and only |S| = floor(t) needs checking.
"""
import itertools
import logging
import math
from typing import Iterable, Optional

import numpy as np
from scipy.special import comb

from ..constants import Provenance
from ..exceptions import NumericalGuardError
from ..types import SpreadCertificate
from ..utils.concurrency import block_seeds, run_parallel_tasks, split_blocks
from .kernel import KernelBasis

logger = logging.getLogger(__name__)

_BATCH = 8192


def _min_retained(B: KernelBasis, subsets: np.ndarray) -> float:
    """min over the given row subsets (b x s) of sigma_min of B with those rows deleted."""
    rows = B.vectors[subsets]  # b x s x dim
    gram = np.einsum("bsd,btd->bst", rows, rows)
    largest = np.linalg.eigvalsh(gram)[:, -1]
    return float(np.sqrt(max(1.0 - float(largest.max()), 0.0)))


def _trivial_value(B: KernelBasis, s: int) -> Optional[float]:
    if B.dim == 0 or s <= 0:
        return 1.0
    if B.N - s < B.dim:
        return 0.0
    return None


def _batches(subsets: Iterable[tuple], size: int):
    iterator = iter(subsets)
    while True:
        batch = list(itertools.islice(iterator, size))
        if not batch:
            return
        yield np.array(batch, dtype=np.int64)


def exact_spread(B: KernelBasis, t: float, budget: int = 1_000_000, workers: int = 1) -> float:
    """Exhaustive over all subsets of size floor(t); refuses above the enumeration budget."""
    s = math.floor(t)
    trivial = _trivial_value(B, s)
    if trivial is not None:
        return trivial
    total = int(comb(B.N, s, exact=True))
    if total > budget:
        raise NumericalGuardError(f"C({B.N},{s}) = {total} subsets exceed the enumeration budget {budget}")
    worst = 1.0
    pending = []
    for batch in _batches(itertools.combinations(range(B.N), s), _BATCH):
        pending.append((_min_retained, (B, batch)))
        if len(pending) >= max(workers, 1):
            worst = min([worst] + run_parallel_tasks(pending, workers))
            pending = []
    if pending:
        worst = min([worst] + run_parallel_tasks(pending, workers))
    logger.debug(f"exact_spread: N={B.N}, dim={B.dim}, t={t}, {total} subsets -> {worst:.6f}")
    return worst


def _sampled_block(B: KernelBasis, s: int, count: int, seed: np.random.SeedSequence) -> float:
    rng = np.random.default_rng(seed)
    # prefixes of random orders: subsets for different t are nested
    orders = np.argsort(rng.random((count, B.N)), axis=1)
    worst = 1.0
    for start in range(0, count, _BATCH):
        worst = min(worst, _min_retained(B, orders[start:start + _BATCH, :s]))
    return worst


def sampled_spread(B: KernelBasis, t: float, samples: int, seed: int = 0,
                   workers: int = 1, block_size: int = 512) -> float:
    """
    Upper estimate of eps(t) from seeded random subsets (exhaustive when
    there are no more subsets than samples). Never a certified lower bound.
    """
    s = math.floor(t)
    trivial = _trivial_value(B, s)
    if trivial is not None:
        return trivial
    if comb(B.N, s, exact=True) <= samples:
        return exact_spread(B, t, budget=samples, workers=workers)
    sizes = split_blocks(samples, block_size)
    seeds = block_seeds(seed, len(sizes))
    tasks = [(_sampled_block, (B, s, size, sd)) for size, sd in zip(sizes, seeds)]
    value = min(run_parallel_tasks(tasks, workers))
    logger.debug(f"sampled_spread: N={B.N}, t={t}, {samples} samples -> {value:.6f}")
    return value


def exact_certificate(B: KernelBasis, t: float, budget: int = 1_000_000,
                      workers: int = 1) -> Optional[SpreadCertificate]:
    """(0, t, eps_exact(t)) with exact-oracle provenance, or None when eps_exact(t) = 0."""
    eps = exact_spread(B, t, budget=budget, workers=workers)
    if eps <= 0:
        return None
    return SpreadCertificate(
        t=0.0, T=float(t), eps=min(eps, 1.0), provenance=Provenance.EXACT_ORACLE,
        trail=(f"exact-spread(t={t})",),
    )


def sampled_certificate(B: KernelBasis, t: float, samples: int, seed: int = 0,
                        workers: int = 1) -> Optional[SpreadCertificate]:
    eps = sampled_spread(B, t, samples, seed=seed, workers=workers)
    if eps <= 0:
        return None
    return SpreadCertificate(
        t=0.0, T=float(t), eps=min(eps, 1.0), provenance=Provenance.SAMPLED,
        trail=(f"sampled-spread(t={t},samples={samples},seed={seed})",),
    )
