# tests/unit/analysis/test_spread.py
import itertools

import numpy as np
import pytest

from l1sections.analysis.kernel import KernelBasis, kernel_basis
from l1sections.analysis.random_kernel import random_sign_matrix
from l1sections.analysis.spread import exact_certificate, exact_spread, sampled_certificate, sampled_spread
from l1sections.constants import Provenance
from l1sections.exceptions import NumericalGuardError
from l1sections.tanner.check_matrix import SignCheckMatrix


def spread_by_svd(B, s: int) -> float:
    """min over |S| = s of sigma_min of the basis with rows S deleted, via full SVDs."""
    worst = 1.0
    for S in itertools.combinations(range(B.N), s):
        keep = np.setdiff1d(np.arange(B.N), S)
        worst = min(worst, float(np.linalg.svd(B.vectors[keep], compute_uv=False)[-1]))
    return worst


def test_spread_of_the_sum_zero_hyperplane(all_ones_row):
    B = kernel_basis(all_ones_row)
    # the worst x = (3, -1, -1, -1)/sqrt(12) keeps a quarter of its energy off one coordinate
    assert exact_spread(B, 1) == pytest.approx(0.5)
    assert exact_spread(B, 0) == 1.0
    assert exact_spread(B, 2) == 0.0


def test_spread_matches_full_svd():
    for seed in range(5):
        B = kernel_basis(random_sign_matrix(4, 9, seed=seed))
        for s in (1, 2, 3):
            assert exact_spread(B, s) == pytest.approx(spread_by_svd(B, s), abs=1e-6)


def test_trivial_cases():
    full = kernel_basis(SignCheckMatrix.empty(5))
    assert exact_spread(full, 2) == 0.0
    point = kernel_basis(SignCheckMatrix.from_dense(np.array([[1, 1], [1, -1]])))
    assert point.dim == 0
    assert exact_spread(point, 1) == 1.0


def test_spread_is_nonincreasing_in_t():
    B = kernel_basis(random_sign_matrix(6, 12, seed=9))
    values = [exact_spread(B, t) for t in range(0, 6)]
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))


def test_fractional_t_is_floored():
    B = kernel_basis(random_sign_matrix(4, 10, seed=2))
    assert exact_spread(B, 2.7) == exact_spread(B, 2)


def test_enumeration_budget():
    B = kernel_basis(random_sign_matrix(8, 30, seed=0))
    with pytest.raises(NumericalGuardError, match="enumeration budget"):
        exact_spread(B, 5, budget=1000)


def test_sampled_value_never_below_exact():
    B = kernel_basis(random_sign_matrix(6, 16, seed=4))
    exact = exact_spread(B, 3)
    sampled = sampled_spread(B, 3, samples=200, seed=1)
    assert sampled >= exact - 1e-12


def test_sampled_spread_is_worker_independent():
    B = kernel_basis(random_sign_matrix(6, 16, seed=4))
    assert sampled_spread(B, 3, samples=700, seed=5, workers=1, block_size=100) == \
        sampled_spread(B, 3, samples=700, seed=5, workers=3, block_size=100)


def test_exact_workers_agree():
    B = kernel_basis(random_sign_matrix(5, 14, seed=6))
    assert exact_spread(B, 3, workers=1) == exact_spread(B, 3, workers=4)


def test_certificates_carry_provenance():
    B = kernel_basis(random_sign_matrix(4, 10, seed=1))
    exact = exact_certificate(B, 2)
    assert exact.provenance is Provenance.EXACT_ORACLE
    assert (exact.t, exact.T) == (0.0, 2.0)
    sampled = sampled_certificate(B, 2, samples=10, seed=3)
    assert sampled.provenance is Provenance.SAMPLED
    assert sampled.eps >= exact.eps - 1e-12
    assert exact_certificate(kernel_basis(SignCheckMatrix.empty(5)), 2) is None


def test_spread_is_invariant_under_coordinate_permutation(rng):
    for seed in range(5):
        A = random_sign_matrix(4, 10, seed=seed)
        perm = rng.permutation(10)
        B, moved = kernel_basis(A), kernel_basis(A.permute_columns(perm))
        for t in (1, 2, 3):
            assert exact_spread(moved, t) == pytest.approx(exact_spread(B, t), abs=1e-9)


def test_spread_depends_only_on_the_subspace(rng):
    A = random_sign_matrix(3, 9, seed=11)
    B = kernel_basis(A)
    negated = kernel_basis(SignCheckMatrix.from_dense(-A.to_dense()))
    Q, _ = np.linalg.qr(rng.standard_normal((B.dim, B.dim)))
    rotated = KernelBasis(B.N, B.vectors @ Q)
    for t in (1, 2):
        expected = exact_spread(B, t)
        assert exact_spread(negated, t) == pytest.approx(expected, abs=1e-9)
        assert exact_spread(rotated, t) == pytest.approx(expected, abs=1e-9)
