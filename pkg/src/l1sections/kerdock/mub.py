# src/l1sections/kerdock/mub.py
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import hadamard
from scipy.special import comb

from ..constants import NORM_TOLERANCE, POWER_ITERATIONS, BentFamilyKind, Provenance
from ..exceptions import ParameterInfeasibleError, VerificationError
from ..tanner.check_matrix import SignCheckMatrix
from ..types import SpreadCertificate
from .bent import BentFamily, build_bent_family, family_capacity

logger = logging.getLogger(__name__)

_SUBSET_BATCH = 20000


@dataclass(frozen=True)
class MubSet:
    """
    Unscaled sign bases; column a of bases[i] is sqrt(k) times a unit vector.
    bases[0] is the Sylvester Hadamard matrix, bases[i] = diag((-1)^f_i) H.
    """

    k: int
    bases: Tuple[np.ndarray, ...] = field(repr=False)
    family: BentFamily = field(repr=False)

    def __len__(self) -> int:
        return len(self.bases)


@dataclass(frozen=True)
class KerdockMatrix:
    """k x d sign pattern; the matrix itself is signs / sqrt(k)."""

    k: int
    d: int
    signs: np.ndarray = field(repr=False)
    num_bases: int
    operator_norm: float
    coherence: float

    def scaled(self) -> np.ndarray:
        return self.signs.astype(np.float64) / math.sqrt(self.k)


def verify_mub(bases: Tuple[np.ndarray, ...]) -> None:
    """Exact scaled-integer checks: B^T B = k I within a basis, squared cross products = k."""
    k = bases[0].shape[0]
    # float32 products of +-1 vectors are exact integers for k < 2^24
    stacked = [b.astype(np.float32) for b in bases]
    identity = k * np.eye(k, dtype=np.float32)
    for i, basis in enumerate(stacked):
        if not np.array_equal(basis.T @ basis, identity):
            raise VerificationError(f"basis {i} (k={k}) is not orthogonal")
        if i + 1 < len(stacked):
            cross = basis.T @ np.hstack(stacked[i + 1:])
            if not np.all(cross * cross == k):
                raise VerificationError(f"basis {i} (k={k}) is not unbiased with a later basis")


def build_mub(
    k: int,
    kind: BentFamilyKind = BentFamilyKind.KERDOCK,
    num_bases: Optional[int] = None,
) -> MubSet:
    """
    Builds num_bases mutually unbiased bases (the Hadamard basis plus one per
    bent function); all bases the family allows when num_bases is None.
    """
    size = None if num_bases is None else max(num_bases - 1, 0)
    family = build_bent_family(k, kind, size=size)
    h = hadamard(k).astype(np.int8)
    bases = [h]
    for f in family.functions:
        bases.append((f.signs().astype(np.int8)[:, None] * h).astype(np.int8))
    verify_mub(tuple(bases))
    for b in bases:
        b.setflags(write=False)
    logger.debug(f"Built {len(bases)} mutually unbiased bases for k={k} ({kind.value})")
    return MubSet(k=k, bases=tuple(bases), family=family)


def max_columns(k: int, kind: BentFamilyKind = BentFamilyKind.KERDOCK) -> int:
    """Largest d for which assemble_matrix(k, d) is admissible."""
    return (family_capacity(k, kind) + 1) * k


def _power_iteration_norm(scaled: np.ndarray) -> float:
    x = np.ones(scaled.shape[1])
    x /= np.linalg.norm(x)
    value = 0.0
    for _ in range(POWER_ITERATIONS):
        y = scaled.T @ (scaled @ x)
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0
        value = math.sqrt(norm)
        x = y / norm
    return value


def _max_coherence(signs: np.ndarray) -> float:
    """max |<a_i, a_j>| over distinct unit columns, computed blockwise."""
    k, d = signs.shape
    cols = signs.astype(np.float32)
    worst = 0.0
    block = max(1, (1 << 22) // max(d, 1))
    for start in range(0, d, block):
        stop = min(start + block, d)
        gram = cols[:, start:stop].T @ cols
        gram[np.arange(stop - start), np.arange(start, stop)] = 0
        worst = max(worst, float(np.abs(gram).max()))
    return worst / k


def assemble_matrix(k: int, d: int, kind: BentFamilyKind = BentFamilyKind.KERDOCK) -> KerdockMatrix:
    """A = [B_1 ... B_q | first r columns of B_(q+1)] with d = qk + r."""
    limit = max_columns(k, kind)
    if not k <= d <= limit:
        raise ParameterInfeasibleError(
            f"d={d} outside the admissible range [{k}, {limit}] of the {kind.value} family for k={k}",
            guard="k <= d <= numBases*k",
        )
    needed = -(-d // k)
    mub = build_mub(k, kind, num_bases=needed)
    signs = np.hstack(mub.bases)[:, :d].copy()
    signs.setflags(write=False)

    scaled = signs.astype(np.float64) / math.sqrt(k)
    column_norms = np.linalg.norm(scaled, axis=0)
    if not np.allclose(column_norms, 1.0, rtol=0, atol=NORM_TOLERANCE):
        raise VerificationError(f"columns of the k={k}, d={d} matrix are not unit vectors")
    coherence = _max_coherence(signs)
    if coherence * math.sqrt(k) > 1.0:
        raise VerificationError(f"coherence {coherence} exceeds 1/sqrt({k})")
    norm = _power_iteration_norm(scaled)
    norm_bound = math.sqrt(needed)
    if norm > norm_bound + NORM_TOLERANCE:
        raise VerificationError(f"operator norm {norm} exceeds sqrt(ceil(d/k)) = {norm_bound}")
    logger.debug(f"Assembled Kerdock matrix k={k}, d={d}: norm={norm:.6f}, coherence={coherence:.6f}")
    return KerdockMatrix(k=k, d=d, signs=signs, num_bases=needed, operator_norm=norm, coherence=coherence)


def local_subspace(
    k: int, d: int, kind: BentFamilyKind = BentFamilyKind.KERDOCK
) -> Tuple[SignCheckMatrix, SpreadCertificate]:
    """Kernel of the k x d Kerdock sign matrix and its (sqrt(k)/2, sqrt(k/d)/4)-spread certificate."""
    matrix = assemble_matrix(k, d, kind)
    check = SignCheckMatrix.from_dense(matrix.signs, label=f"kerdock k={k} d={d}")
    notes = ("degenerate",) if d == k else ()
    if notes:
        logger.warning(f"Kerdock inner space with d == k = {k} has a trivial kernel")
    certificate = SpreadCertificate(
        t=0.0,
        T=math.sqrt(k) / 2,
        eps=0.25 * math.sqrt(k / d),
        provenance=Provenance.PROVED_ARITHMETIC,
        trail=(f"spread-kernel(k={k},d={d},coherence=1/sqrt(k))",),
        notes=notes,
    )
    return check, certificate


def column_subset_sigma_min(
    matrix: KerdockMatrix,
    size: Optional[int] = None,
    budget: int = 1_000_000,
    samples: int = 100_000,
    seed: int = 0,
) -> Tuple[float, bool, int]:
    """
    min sigma_min(A_S) over column subsets |S| = size (default floor(sqrt(k)/2)).
    Smaller subsets only raise sigma_min, so one size covers all |S| <= size.
    Exhaustive when C(d, size) <= budget, else `samples` seeded random subsets.
    Returns (value, exhaustive, subsets checked).
    """
    s = int(math.isqrt(matrix.k) // 2) if size is None else size
    if s <= 0:
        return 1.0, True, 0
    scaled = matrix.scaled()
    total = int(comb(matrix.d, s, exact=True))
    exhaustive = total <= budget
    if exhaustive:
        subsets = itertools.combinations(range(matrix.d), s)
        count = total
    else:
        rng = np.random.default_rng(seed)
        subsets = (tuple(rng.choice(matrix.d, size=s, replace=False)) for _ in range(samples))
        count = samples
    worst = math.inf
    while True:
        batch = np.array(list(itertools.islice(subsets, _SUBSET_BATCH)), dtype=np.int64)
        if batch.size == 0:
            break
        cols = scaled[:, batch]  # k x b x s
        gram = np.einsum("kbi,kbj->bij", cols, cols)
        smallest = np.linalg.eigvalsh(gram)[:, 0]
        worst = min(worst, float(np.sqrt(max(smallest.min(), 0.0))))
    logger.debug(f"sigma_min over {count} subsets of size {s} (exhaustive={exhaustive}): {worst:.6f}")
    return worst, exhaustive, count
