# src/l1sections/analysis/random_kernel.py
import logging

import numpy as np

from ..exceptions import DomainError
from ..tanner.check_matrix import SignCheckMatrix

logger = logging.getLogger(__name__)


def random_sign_matrix(k: int, N: int, seed: int) -> SignCheckMatrix:
    """Seeded k x N matrix of independent uniform signs; the empirical baseline."""
    if not 1 <= k <= N:
        raise DomainError(f"need 1 <= k <= N, got k={k}, N={N}")
    rng = np.random.default_rng(seed)
    signs = rng.choice(np.array([-1, 1], dtype=np.int8), size=(k, N))
    return SignCheckMatrix.from_dense(signs, label=f"random k={k} seed={seed}")
