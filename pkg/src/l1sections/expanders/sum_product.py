# src/l1sections/expanders/sum_product.py
import logging
from typing import Tuple

import numpy as np

from ..algebra.primes import smallest_prime_cube_at_least
from ..constants import ProfileKind
from ..exceptions import DomainError
from .graphs import BipartiteGraph, LeftRegularGraph
from .profile import ProfileBound
from .regularize import right_regularize

logger = logging.getLogger(__name__)


def sum_product_graph(p: int) -> LeftRegularGraph:
    """
    Left vertex (a, b, c) in F_p^3, index a p^2 + b p + c, is adjacent to
    (1, a), (2, b), (3, c), (4, a b + c); right vertex (i, x) has index (i-1) p + x.
    """
    idx = np.arange(p ** 3)
    a, b, c = idx // (p * p), (idx // p) % p, idx % p
    neighbors = np.column_stack([a, p + b, 2 * p + c, 3 * p + (a * b + c) % p])
    return LeftRegularGraph(p ** 3, 4 * p, 4, neighbors)


def build_sum_product(N: int, xi0: float = 0.0) -> Tuple[BipartiteGraph, ProfileBound]:
    """(N, n, 8, ~N^(2/3))-right regular graph over the smallest prime p with p^3 >= N."""
    if N < 8:
        raise DomainError(f"sum-product graph needs N >= 8, got {N}")
    p = smallest_prime_cube_at_least(N)
    H = sum_product_graph(p).restrict_left(N).drop_isolated_right()
    G = right_regularize(H)
    params = {"p": p}
    if xi0 > 0:
        params["xi0"] = xi0
    bound = ProfileBound(ProfileKind.SUMPRODUCT, G.N, G.n, G.d, params)
    logger.info(f"Sum-product expander: N={N}, p={p}, realized (n, D, d)=({G.n}, {G.D}, {G.d})")
    return G, bound
