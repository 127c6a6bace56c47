# src/l1sections/expanders/lps.py
"""(p+1)-regular Cayley graphs of PSL2(q) / PGL2(q) from integer quaternions of norm p."""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.sparse.linalg import eigsh

from ..algebra.primes import is_prime, legendre_symbol, lps_vertex_count, sqrt_minus_one
from ..constants import DENSE_EIGEN_LIMIT, EIGEN_TOLERANCE, LANCZOS_MAX_ITER, LANCZOS_SEED
from ..exceptions import DomainError, NumericalGuardError, VerificationError
from ..utils.concurrency import block_seeds, run_parallel_tasks, split_blocks
from .graphs import Graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralReport:
    p: int
    q: int
    vertices: int
    degree: int
    lambda2: float
    ramanujan_bound: float
    folded: bool
    alon_chung_samples: int = 0
    alon_chung_passed: Optional[bool] = None

    @property
    def ramanujan(self) -> bool:
        return self.lambda2 <= self.ramanujan_bound + EIGEN_TOLERANCE


def quaternion_generators(p: int) -> np.ndarray:
    """Solutions of a0^2+a1^2+a2^2+a3^2 = p with a0 odd positive, a1..a3 even; sorted."""
    bound = math.isqrt(p)
    found = []
    for a0 in range(1, bound + 1, 2):
        for a1 in range(-bound, bound + 1):
            for a2 in range(-bound, bound + 1):
                for a3 in range(-bound, bound + 1):
                    if a1 % 2 or a2 % 2 or a3 % 2:
                        continue
                    if a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p:
                        found.append((a0, a1, a2, a3))
    if len(found) != p + 1:
        raise VerificationError(f"expected {p + 1} quaternion generators for p={p}, found {len(found)}")
    return np.array(sorted(found), dtype=np.int64)


def _normalize(mats: np.ndarray, inverses: np.ndarray, q: int) -> np.ndarray:
    """Projective representative: scale so the first nonzero of (a, b) is 1."""
    a, b = mats[:, 0], mats[:, 1]
    scale = np.where(a != 0, inverses[a], inverses[b])
    return (mats * scale[:, None]) % q


def _multiply(x: np.ndarray, y: np.ndarray, q: int) -> np.ndarray:
    """Row-wise 2x2 products, matrices flattened as (a, b, c, d)."""
    a = x[:, 0] * y[:, 0] + x[:, 1] * y[:, 2]
    b = x[:, 0] * y[:, 1] + x[:, 1] * y[:, 3]
    c = x[:, 2] * y[:, 0] + x[:, 3] * y[:, 2]
    d = x[:, 2] * y[:, 1] + x[:, 3] * y[:, 3]
    return np.column_stack([a, b, c, d]) % q


def _keys(mats: np.ndarray, q: int) -> np.ndarray:
    return ((mats[:, 0] * q + mats[:, 1]) * q + mats[:, 2]) * q + mats[:, 3]


def generator_matrices(p: int, q: int) -> np.ndarray:
    i = sqrt_minus_one(q)
    quats = quaternion_generators(p)
    a0, a1, a2, a3 = quats.T
    mats = np.column_stack([a0 + i * a1, a2 + i * a3, -a2 + i * a3, a0 - i * a1]) % q
    inverses = np.array([0] + [pow(x, q - 2, q) for x in range(1, q)], dtype=np.int64)
    return _normalize(mats, inverses, q)


def twist_matrix(p: int, q: int) -> Optional[np.ndarray]:
    """
    None when p is a square mod q. Otherwise c = [[0, 1], [n, 0]] for the
    smallest non-residue n: c lies outside PSL2(q) and c^2 = nI is scalar, so
    x -> c x s keeps PSL2(q) and is an involution on each edge.
    """
    if legendre_symbol(p, q) == 1:
        return None
    n = next(a for a in range(2, q) if legendre_symbol(a, q) == -1)
    return np.array([0, 1, n, 0], dtype=np.int64)


def _step(mats: np.ndarray, gens: np.ndarray, twist: Optional[np.ndarray], inverses: np.ndarray,
          q: int) -> np.ndarray:
    """Row i * len(gens) + j is the neighbour of mats[i] along generator j."""
    left = mats if twist is None else _multiply(np.tile(twist, (len(mats), 1)), mats, q)
    prods = _multiply(np.repeat(left, len(gens), axis=0), np.tile(gens, (len(mats), 1)), q)
    return _normalize(prods, inverses, q)


def _inverse_pairs(neighbor: np.ndarray) -> np.ndarray:
    """Generator index j' undoing generator j, read off at the identity (vertex 0)."""
    pairs = np.array([int(np.flatnonzero(neighbor[neighbor[0, j]] == 0)[0]) for j in range(neighbor.shape[1])])
    if np.any(pairs == np.arange(pairs.size)) or np.any(pairs[pairs] != np.arange(pairs.size)):
        raise VerificationError("generators do not pair up with their inverses")
    return pairs


def build_lps(p: int, q: int, max_vertices: int = 20000) -> Graph:
    """
    (p+1)-regular graph on PSL2(q): x ~ x s when p is a square mod q, and
    x ~ c x s (see twist_matrix) otherwise, which folds the bipartite PGL2(q)
    graph onto one of its sides. Vertices are numbered in breadth-first order
    from the identity. The graph carries the 2-factors {x, x s} given by one
    generator of each inverse pair.
    """
    if p == q:
        raise DomainError(f"p and q must differ, got p=q={p}")
    for name, value in (("p", p), ("q", q)):
        if not is_prime(value) or value % 4 != 1:
            raise DomainError(f"{name}={value} must be a prime congruent to 1 mod 4")
    if q <= 2 * math.sqrt(p):
        raise DomainError(f"q={q} must exceed 2 sqrt(p) = {2 * math.sqrt(p):.3f}")
    expected = lps_vertex_count(p, q)
    if expected > max_vertices:
        raise NumericalGuardError(f"LPS({p},{q}) has {expected} vertices, above the limit {max_vertices}")

    gens = generator_matrices(p, q)
    twist = twist_matrix(p, q)
    inverses = np.array([0] + [pow(x, q - 2, q) for x in range(1, q)], dtype=np.int64)
    identity = np.array([[1, 0, 0, 1]], dtype=np.int64)
    seen_keys = {int(_keys(identity, q)[0]): 0}
    vertices = [identity[0]]
    frontier = identity
    while frontier.size:
        prods = _step(frontier, gens, twist, inverses, q)
        fresh = []
        for mat, key in zip(prods, _keys(prods, q).tolist()):
            if key not in seen_keys:
                seen_keys[key] = len(seen_keys)
                vertices.append(mat)
                fresh.append(mat)
        if len(seen_keys) > expected:
            raise VerificationError(f"LPS({p},{q}) closure exceeded {expected} vertices")
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, 4)

    mats = np.vstack(vertices)
    count = len(mats)
    if count != expected:
        raise VerificationError(f"LPS({p},{q}) has {count} vertices, expected {expected}")
    sorted_keys = np.array(sorted(seen_keys))
    index_of = np.array([seen_keys[k] for k in sorted_keys.tolist()], dtype=np.int64)
    prods = _step(mats, gens, twist, inverses, q)
    neighbor = index_of[np.searchsorted(sorted_keys, _keys(prods, q))].reshape(count, len(gens))
    pairs = _inverse_pairs(neighbor)
    representatives = np.flatnonzero(np.arange(pairs.size) < pairs)
    graph = Graph(count, neighbor, p + 1, factors=neighbor[:, representatives])
    if not graph.is_connected():
        raise VerificationError(f"LPS({p},{q}) is not connected")
    how = "Cayley graph" if twist is None else "folded PGL2 graph"
    logger.info(f"Built LPS({p},{q}) on PSL2({q}) as {how}: {count} vertices, degree {p + 1}")
    return graph


def second_eigenvalue(Y: Graph) -> float:
    """Largest |eigenvalue| after removing the trivial ones (degree, and -degree if bipartite)."""
    deg = float(Y.degree)
    if Y.vertices <= DENSE_EIGEN_LIMIT:
        values = np.linalg.eigvalsh(Y.adjacency_matrix.toarray())
    else:
        rng = np.random.default_rng(LANCZOS_SEED)
        v0 = rng.standard_normal(Y.vertices)
        values = eigsh(Y.adjacency_matrix, k=3, which="LM", v0=v0, maxiter=LANCZOS_MAX_ITER,
                       return_eigenvectors=False)
    values = values.tolist()
    # a connected non-bipartite graph has no eigenvalue -deg
    for trivial in (deg, -deg):
        match = next((v for v in values if abs(v - trivial) <= EIGEN_TOLERANCE), None)
        if match is not None:
            values.remove(match)
    return max((abs(v) for v in values), default=0.0)


def alon_chung_check(Y: Graph, subset: Sequence[int], lambda2: float) -> bool:
    """Edges inside S <= (g^2 + g lambda2/d) d n / 2 with g = |S|/n."""
    n, d = Y.vertices, Y.degree
    gamma = len(set(subset)) / n
    bound = (gamma * gamma + gamma * lambda2 / d) * d * n / 2
    return Y.induced_edge_count(list(set(subset))) <= bound + 1e-9


def _alon_chung_block(Y: Graph, lambda2: float, count: int, seed: np.random.SeedSequence) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        size = int(rng.integers(1, Y.vertices + 1))
        subset = rng.choice(Y.vertices, size=size, replace=False)
        if not alon_chung_check(Y, subset, lambda2):
            logger.warning(f"Alon-Chung bound violated on a subset of size {size}")
            return False
    return True


def alon_chung_sample(Y: Graph, lambda2: float, samples: int, seed: int = 0,
                      workers: int = 1, block_size: int = 256) -> bool:
    """Randomized soundness test of lambda2; independent of the worker count."""
    sizes = split_blocks(samples, block_size)
    seeds = block_seeds(seed, len(sizes))
    tasks = [(_alon_chung_block, (Y, lambda2, size, s)) for size, s in zip(sizes, seeds)]
    return all(run_parallel_tasks(tasks, workers))


def spectral_report(p: int, q: int, Y: Optional[Graph] = None, samples: int = 0,
                    seed: int = 0, workers: int = 1) -> SpectralReport:
    Y = build_lps(p, q) if Y is None else Y
    lambda2 = second_eigenvalue(Y)
    passed = alon_chung_sample(Y, lambda2, samples, seed, workers) if samples else None
    report = SpectralReport(
        p=p, q=q, vertices=Y.vertices, degree=Y.degree, lambda2=lambda2,
        ramanujan_bound=2 * math.sqrt(p), folded=twist_matrix(p, q) is not None,
        alon_chung_samples=samples, alon_chung_passed=passed,
    )
    if not report.ramanujan:
        logger.warning(f"LPS({p},{q}): lambda2={lambda2:.6f} above 2 sqrt(p)={report.ramanujan_bound:.6f}")
    return report
