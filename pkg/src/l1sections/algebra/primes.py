# src/l1sections/algebra/primes.py
import logging
import math
from typing import Iterator, Tuple

from ..exceptions import DomainError, ParameterInfeasibleError

logger = logging.getLogger(__name__)


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


def primes_one_mod_four(start: int = 2) -> Iterator[int]:
    """Primes q >= start with q = 1 (mod 4), ascending."""
    q = max(start, 5)
    q += (1 - q) % 4
    while True:
        if is_prime(q):
            yield q
        q += 4


def smallest_prime_at_least(n: int) -> int:
    p = max(n, 2)
    while not is_prime(p):
        p += 1
    return p


def smallest_prime_cube_at_least(n: int) -> int:
    p = 2
    while p ** 3 < n:
        p = smallest_prime_at_least(p + 1)
    return p


def legendre_symbol(a: int, q: int) -> int:
    """(a|q) in {-1, 0, 1} for an odd prime q (Euler's criterion)."""
    value = pow(a % q, (q - 1) // 2, q)
    return -1 if value == q - 1 else value


def sqrt_minus_one(q: int) -> int:
    """Smallest i in [1, q) with i^2 = -1 (mod q); needs q = 1 (mod 4)."""
    if q % 4 != 1 or not is_prime(q):
        raise DomainError(f"-1 is not a square modulo {q}")
    for i in range(1, q):
        if (i * i + 1) % q == 0:
            return i
    raise DomainError(f"-1 is not a square modulo {q}")


def lps_vertex_count(p: int, q: int) -> int:
    """|PSL2(q)| = q(q^2-1)/2; the LPS graph lives on PSL2(q) for either Legendre symbol (p|q)."""
    return q * (q * q - 1) // 2


def lps_edge_count(p: int, q: int) -> int:
    """Left side of the edge-vertex incidence graph of LPS(p, q)."""
    return (p + 1) * lps_vertex_count(p, q) // 2


def find_prime_pq(d: int, N: int) -> Tuple[int, int]:
    """
    p: largest prime <= d - 1 with p = 1 (mod 4).
    q: smallest prime = 1 (mod 4), q != p, q > 2 sqrt(p), with q(q^2-1)(p+1)/8 >= N.
    """
    if d < 5:
        raise ParameterInfeasibleError(f"parameters too small: no prime p = 1 (mod 4) below d={d}", guard="d >= 5")
    if N < d:
        raise DomainError(f"N={N} must be at least d={d}")
    p = next((c for c in range(d - 1, 4, -1) if c % 4 == 1 and is_prime(c)), None)
    if p is None:
        raise ParameterInfeasibleError(f"parameters too small: no prime p = 1 (mod 4) below d={d}", guard="d >= 5")
    for q in primes_one_mod_four():
        if q == p or q <= 2 * math.sqrt(p):
            continue
        if q * (q * q - 1) * (p + 1) >= 8 * N:
            logger.debug(f"find_prime_pq(d={d}, N={N}) -> p={p}, q={q}")
            return p, q
    raise ParameterInfeasibleError(f"no admissible q for d={d}, N={N}")  # unreachable


def balanced_prime_pq(d: int, N: int) -> Tuple[int, int]:
    """
    Same degree cap as find_prime_pq, but q is the smallest prime whose exact
    edge count (p+1)|PSL2(q)|/2 reaches N for some admissible p <= that cap;
    p is then the largest such prime. Cut down to N edges, the incidence graph
    has right degree about 2N/|V|, so the smallest vertex set gives the largest.
    """
    cap, _ = find_prime_pq(d, N)
    candidates = [c for c in range(5, cap + 1) if c % 4 == 1 and is_prime(c)]
    for q in primes_one_mod_four():
        admissible = [p for p in candidates if p != q and q > 2 * math.sqrt(p)]
        if admissible and lps_edge_count(admissible[-1], q) >= N:
            logger.debug(f"balanced_prime_pq(d={d}, N={N}) -> p={admissible[-1]}, q={q}")
            return admissible[-1], q
    raise ParameterInfeasibleError(f"no admissible q for d={d}, N={N}")  # unreachable
