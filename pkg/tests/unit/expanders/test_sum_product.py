# tests/unit/expanders/test_sum_product.py
import numpy as np
import pytest

from l1sections.constants import ProfileKind, Provenance
from l1sections.exceptions import DomainError
from l1sections.expanders.profile import sampled_profile_check
from l1sections.expanders.sum_product import build_sum_product, sum_product_graph


def test_sum_product_graph_adjacency():
    H = sum_product_graph(3)
    assert (H.N, H.n, H.D) == (27, 12, 4)
    # (a, b, c) = (1, 2, 2): (1, 1), (2, 2), (3, 2), (4, 1*2+2 = 1)
    assert H.left_neighbors[1 * 9 + 2 * 3 + 2].tolist() == [1, 5, 8, 10]
    assert all(r.size == 9 for r in H.right_lists())


def test_header_at_27():
    G, bound = build_sum_product(27)
    assert G.header == (27, 12, 8, 9)
    assert bound.kind is ProfileKind.SUMPRODUCT
    assert bound.params == {"p": 3}
    assert bound.provenance is Provenance.PROVED_ARITHMETIC


def test_truncated_instance_is_right_regular():
    G, _ = build_sum_product(100)
    assert G.N == 100
    assert G.max_left_degree <= 8
    assert np.all(np.diff(G.adjacency, axis=1) > 0)
    assert set(np.unique(G.adjacency).tolist()) == set(range(100))


def test_assumed_exponent_changes_provenance():
    _, bound = build_sum_product(125, xi0=0.05)
    assert bound.provenance is Provenance.ASSUMED_CONSTANT


def test_cube_root_bound_holds_on_samples():
    G, bound = build_sum_product(125)
    assert sampled_profile_check(G, bound, samples=400, seed=11).passed


def test_small_N_rejected():
    with pytest.raises(DomainError):
        build_sum_product(7)
