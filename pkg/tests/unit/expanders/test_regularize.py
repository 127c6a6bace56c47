# tests/unit/expanders/test_regularize.py
import itertools
import math

import numpy as np

from l1sections.expanders.graphs import LeftRegularGraph
from l1sections.expanders.profile import profile_table
from l1sections.expanders.regularize import right_regularize
from tests.conftest import random_left_regular


def left_regular_profile(H: LeftRegularGraph) -> np.ndarray:
    """Exact min |Gamma(S)| over |S| >= m, straight from the left adjacency."""
    smallest = np.full(H.N + 1, H.n, dtype=np.int64)
    smallest[0] = 0
    for size in range(1, H.N + 1):
        for subset in itertools.combinations(range(H.N), size):
            gamma = np.unique(H.left_neighbors[list(subset)]).size
            smallest[size] = min(smallest[size], gamma)
    return np.minimum.accumulate(smallest[::-1])[::-1]


def test_regular_input_is_unchanged_up_to_order():
    H = LeftRegularGraph.from_lists(3, [[0, 1], [1, 2], [0, 2]])
    G = right_regularize(H)
    assert G.header == (3, 3, 4, 2)
    assert G.adjacency.tolist() == [[0, 2], [0, 1], [1, 2]]


def test_leftover_edges_are_padded_with_filler():
    # right vertex 0 has degree 3, right vertex 1 degree 1; d = ceil(4 * 1 / 2) = 2
    H = LeftRegularGraph.from_lists(2, [[0], [0], [0], [1]])
    G = right_regularize(H)
    assert G.d == 2
    assert G.n == 3
    assert G.adjacency.tolist()[0] == [0, 1]
    assert 2 in G.adjacency.tolist()[1]
    assert 3 in G.adjacency.tolist()[2]
    assert G.max_left_degree <= 2


def test_random_graphs_keep_size_degree_and_expansion(rng):
    for _ in range(100):
        N = int(rng.integers(2, 13))
        n = int(rng.integers(2, 9))
        D = int(rng.integers(1, n + 1))
        H = random_left_regular(rng, N, n, D)
        G = right_regularize(H)
        assert G.d == math.ceil(N * D / n)
        assert G.n <= 2 * n
        assert G.max_left_degree <= 2 * D
        before = left_regular_profile(H)
        after = profile_table(G)
        assert np.all(after >= before)
