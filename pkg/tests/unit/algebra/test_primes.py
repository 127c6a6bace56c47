# tests/unit/algebra/test_primes.py
import math

import pytest

from l1sections.algebra.primes import (
    balanced_prime_pq,
    find_prime_pq,
    is_prime,
    legendre_symbol,
    lps_edge_count,
    lps_vertex_count,
    primes_one_mod_four,
    smallest_prime_cube_at_least,
    sqrt_minus_one,
)
from l1sections.exceptions import DomainError, ParameterInfeasibleError


def test_primes_one_mod_four_prefix():
    gen = primes_one_mod_four()
    assert [next(gen) for _ in range(6)] == [5, 13, 17, 29, 37, 41]


def test_is_prime_small_values():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_legendre_and_square_root_of_minus_one():
    assert legendre_symbol(5, 13) == -1
    assert legendre_symbol(13, 17) == 1
    i = sqrt_minus_one(13)
    assert (i * i + 1) % 13 == 0


def test_lps_vertex_counts():
    # PSL2(q) whether or not p is a square mod q
    assert lps_vertex_count(5, 13) == 1092
    assert lps_vertex_count(13, 17) == 2448
    assert lps_edge_count(5, 13) == 3276
    assert lps_edge_count(17, 13) == 9828


def test_find_prime_pq_respects_constraints():
    for d, N in [(6, 100), (14, 1000), (14, 8568), (30, 5000), (62, 20000)]:
        p, q = find_prime_pq(d, N)
        assert p <= d - 1 and p % 4 == 1 and is_prime(p)
        assert q % 4 == 1 and is_prime(q) and q != p
        assert q > 2 * math.sqrt(p)
        assert q * (q * q - 1) * (p + 1) >= 8 * N


def test_find_prime_pq_known_pairs():
    assert find_prime_pq(14, 8568) == (13, 17)
    assert find_prime_pq(6, 1000) == (5, 13)


def test_find_prime_pq_rejects_small_degree():
    with pytest.raises(ParameterInfeasibleError, match="parameters too small"):
        find_prime_pq(4, 100)
    with pytest.raises(ParameterInfeasibleError):
        find_prime_pq(5, 100)
    with pytest.raises(DomainError):
        find_prime_pq(14, 10)


def test_smallest_prime_cube():
    assert smallest_prime_cube_at_least(27) == 3
    assert smallest_prime_cube_at_least(28) == 5
    assert smallest_prime_cube_at_least(12167) == 23


@pytest.mark.parametrize("d, N, expected", [
    (6, 3276, (5, 13)),
    (6, 3277, (5, 17)),
    (18, 4096, (17, 13)),
    (14, 1024, (5, 13)),
    (14, 8568, (13, 17)),
])
def test_balanced_prime_pq_takes_the_smallest_graph_with_enough_edges(d, N, expected):
    p, q = balanced_prime_pq(d, N)
    assert (p, q) == expected
    assert p <= find_prime_pq(d, N)[0]
    assert lps_edge_count(p, q) >= N


def test_balanced_prime_pq_keeps_q_above_twice_root_p():
    # q = 13 is too small for p = 53, so the next prime comes in
    p, q = balanced_prime_pq(54, 30000)
    assert q > 2 * math.sqrt(p)
    assert lps_edge_count(p, q) >= 30000
