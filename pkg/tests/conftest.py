# tests/conftest.py
import copy

import numpy as np
import pytest
import yaml

from l1sections.config import PROJECT_ROOT
from l1sections.expanders.graphs import BipartiteGraph, LeftRegularGraph, cycle_graph
from l1sections.expanders.spectral import edge_vertex_incidence
from l1sections.kerdock.mub import local_subspace
from l1sections.tanner.check_matrix import SignCheckMatrix


def _load_default_config():
    with open(PROJECT_ROOT / "config" / "default.yaml", "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


_DEFAULT_CONFIG = _load_default_config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def test_config(tmp_path):
    """Packaged defaults with output and logs redirected into tmp_path."""
    config = copy.deepcopy(_DEFAULT_CONFIG)
    config["output"]["directory"] = str(tmp_path / "output")
    config["logging"]["file"] = str(tmp_path / "logs" / "test.log")
    config["logging"]["console"] = False
    config["analysis"]["samples"] = 500
    config["expanders"]["alon_chung_samples"] = 50
    config["concurrency"]["workers"] = 2
    return config


@pytest.fixture
def triangle_incidence() -> BipartiteGraph:
    return edge_vertex_incidence(cycle_graph(3))


@pytest.fixture
def kerdock_16_32():
    return local_subspace(16, 32)


@pytest.fixture
def all_ones_row() -> SignCheckMatrix:
    return SignCheckMatrix.from_dense(np.ones((1, 4), dtype=np.int8), label="all ones")


def random_left_regular(rng: np.random.Generator, N: int, n: int, D: int) -> LeftRegularGraph:
    lists = [sorted(rng.choice(n, size=D, replace=False).tolist()) for _ in range(N)]
    return LeftRegularGraph.from_lists(n, lists)


def random_right_regular(rng: np.random.Generator, n: int, d: int, N: int) -> BipartiteGraph:
    """n right vertices with d distinct random left neighbours each; left degrees are whatever results."""
    adjacency = np.sort(np.array([rng.choice(N, size=d, replace=False) for _ in range(n)]), axis=1)
    D = int(np.bincount(adjacency.ravel(), minlength=N).max())
    return BipartiteGraph(N=N, n=n, D=D, d=d, adjacency=adjacency)


def random_sign_check(rng: np.random.Generator, k: int, d: int) -> SignCheckMatrix:
    return SignCheckMatrix.from_dense(np.where(rng.random((k, d)) < 0.5, -1, 1).astype(np.int8))
