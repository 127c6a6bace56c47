# src/l1sections/expanders/profile.py
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..constants import BRUTEFORCE_MAX_LEFT, BRUTEFORCE_MAX_RIGHT, ProfileKind, Provenance
from ..exceptions import DomainError, NumericalGuardError
from ..utils.concurrency import block_seeds, run_parallel_tasks, split_blocks
from .graphs import BipartiteGraph

logger = logging.getLogger(__name__)

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


def popcount(words: np.ndarray) -> np.ndarray:
    """Bit count of each uint64 entry."""
    x = words.astype(np.uint64)
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return ((x * _H01) >> np.uint64(56)).astype(np.int64)


@dataclass(frozen=True)
class ProfileBound:
    """
    Lower bound m -> Lambda_G(m) for one graph. Always nondecreasing in m and
    never above n.
    """

    kind: ProfileKind
    N: int
    n: int
    d: int
    params: Dict[str, Any] = field(default_factory=dict)
    table: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def provenance(self) -> Provenance:
        if self.kind is ProfileKind.BRUTEFORCE:
            return Provenance.EXACT_ORACLE
        if self.params.get("xi0", 0.0) > 0:
            return Provenance.ASSUMED_CONSTANT
        return Provenance.PROVED_ARITHMETIC

    def _raw(self, m: int) -> float:
        if self.kind is ProfileKind.SPECTRAL:
            d_y, n_y = self.params["d_Y"], self.params["N_Y"]
            return min(m / (2 * math.sqrt(d_y)), math.sqrt(2 * n_y * m) / d_y)
        if self.kind is ProfileKind.SUMPRODUCT:
            trivial = m ** (1 / 3)
            xi0 = self.params.get("xi0", 0.0)
            if xi0 > 0:
                return max(trivial, min(self.n ** 0.9 / 8, m ** (1 / 3 + xi0)))
            return trivial
        if self.kind is ProfileKind.TRIVIAL:
            return m * self.params.get("min_left_degree", 1) / self.d
        if self.table is None:
            raise DomainError("bruteforce profile has no table")
        return float(self.table[min(m, self.N)])

    def evaluate(self, m: float) -> float:
        if m <= 0:
            return 0.0
        return min(float(self.n), self._raw(math.ceil(m)))

    def describe(self) -> str:
        extras = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind.value}({extras})" if extras else self.kind.value


def trivial_profile(G: BipartiteGraph) -> ProfileBound:
    min_degree = int(G.left_degrees.min()) if G.N else 0
    return ProfileBound(ProfileKind.TRIVIAL, G.N, G.n, G.d, {"min_left_degree": min_degree})


def _right_masks(G: BipartiteGraph) -> np.ndarray:
    masks = np.zeros(G.N, dtype=np.int64)
    for j, members in enumerate(G.adjacency):
        masks[members] |= 1 << j
    return masks


def _table_by_right_subsets(G: BipartiteGraph) -> np.ndarray:
    # c(R) = #{i : Gamma(i) within R}; Lambda(m) = min |R| with c(R) >= m
    subsets = np.arange(1 << G.n, dtype=np.int64)
    covered = np.zeros(subsets.size, dtype=np.int32)
    for mask in _right_masks(G):
        covered += (mask & ~subsets) == 0
    sizes = popcount(subsets)
    best = np.full(G.n + 1, -1, dtype=np.int64)
    np.maximum.at(best, sizes, covered)
    best = np.maximum.accumulate(best)
    table = np.zeros(G.N + 1, dtype=np.int64)
    for m in range(1, G.N + 1):
        table[m] = int(np.argmax(best >= m))
    return table


def _table_by_left_subsets(G: BipartiteGraph) -> np.ndarray:
    words = -(-G.n // 64)
    left = np.zeros((G.N, words), dtype=np.uint64)
    for j, members in enumerate(G.adjacency):
        left[members, j // 64] |= np.uint64(1) << np.uint64(j % 64)
    union = np.zeros((1 << G.N, words), dtype=np.uint64)
    for i in range(G.N):
        half = 1 << i
        union[half:2 * half] = union[:half] | left[i]
    gamma = popcount(union).sum(axis=1)
    sizes = popcount(np.arange(1 << G.N, dtype=np.uint64))
    smallest = np.full(G.N + 1, G.n, dtype=np.int64)
    np.minimum.at(smallest, sizes, gamma)
    # Lambda(m) = min over |S| >= m
    return np.minimum.accumulate(smallest[::-1])[::-1]


def profile_table(G: BipartiteGraph) -> np.ndarray:
    """Exact Lambda_G(m) for m = 0..N."""
    if G.n <= BRUTEFORCE_MAX_RIGHT:
        table = _table_by_right_subsets(G)
    elif G.N <= BRUTEFORCE_MAX_LEFT:
        table = _table_by_left_subsets(G)
    else:
        raise NumericalGuardError(
            f"exhaustive profile needs N <= {BRUTEFORCE_MAX_LEFT} or n <= {BRUTEFORCE_MAX_RIGHT}, got N={G.N}, n={G.n}"
        )
    table[0] = 0
    return table


def profile_bruteforce(G: BipartiteGraph, m: float) -> int:
    """Lambda_G(m) = min |Gamma(S)| over |S| >= m, by exhaustive enumeration."""
    if m <= 0:
        return 0
    if m > G.N:
        raise DomainError(f"m={m} exceeds the number of left vertices N={G.N}")
    return int(profile_table(G)[math.ceil(m)])


def bruteforce_profile(G: BipartiteGraph) -> ProfileBound:
    return ProfileBound(ProfileKind.BRUTEFORCE, G.N, G.n, G.d, {}, table=profile_table(G))


@dataclass(frozen=True)
class SampledProfileResult:
    samples: int
    violations: int
    min_slack: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _profile_block(G: BipartiteGraph, bound: ProfileBound, count: int,
                   seed: np.random.SeedSequence, max_size: int) -> tuple[int, float]:
    rng = np.random.default_rng(seed)
    violations, slack = 0, math.inf
    for _ in range(count):
        size = int(rng.integers(1, max_size + 1))
        subset = rng.choice(G.N, size=size, replace=False)
        gap = G.neighborhood_size(subset) - bound.evaluate(size)
        slack = min(slack, gap)
        if gap < -1e-9:
            violations += 1
    return violations, slack


def sampled_profile_check(G: BipartiteGraph, bound: ProfileBound, samples: int, seed: int = 0,
                          workers: int = 1, block_size: int = 512,
                          max_size: Optional[int] = None) -> SampledProfileResult:
    """
    Checks |Gamma(S)| >= bound(|S|) on seeded random subsets. Block i always
    draws from the i-th spawned seed, so the outcome does not depend on workers.
    """
    max_size = G.N if max_size is None else min(max_size, G.N)
    sizes = split_blocks(samples, block_size)
    seeds = block_seeds(seed, len(sizes))
    tasks = [(_profile_block, (G, bound, size, s, max_size)) for size, s in zip(sizes, seeds)]
    results = run_parallel_tasks(tasks, workers)
    violations = sum(v for v, _ in results)
    slack = min((s for _, s in results), default=math.inf)
    if violations:
        logger.warning(f"{violations} of {samples} sampled subsets violate the {bound.describe()} profile")
    return SampledProfileResult(samples=samples, violations=violations, min_slack=slack)
