# tests/unit/analysis/test_distortion.py
import math

import numpy as np
import pytest

from l1sections.analysis.certificates import spread_to_distortion
from l1sections.analysis.distortion import distortion_lower_bound, distortion_ratio, distortion_sandwich, sign_shrink
from l1sections.analysis.kernel import KernelBasis, kernel_basis
from l1sections.analysis.random_kernel import random_sign_matrix
from l1sections.analysis.spread import exact_certificate
from l1sections.tanner.check_matrix import SignCheckMatrix
from l1sections.types import DistortionBound


def test_distortion_ratio_extremes():
    assert distortion_ratio(np.ones(16))[0] == pytest.approx(1.0)
    spike = np.zeros(16)
    spike[3] = -2.0
    assert distortion_ratio(spike)[0] == pytest.approx(4.0)
    assert distortion_ratio(np.zeros(4))[0] == 0.0


def test_distortion_ratio_is_columnwise():
    x = np.column_stack([np.ones(4), np.array([1.0, 0, 0, 0])])
    assert distortion_ratio(x).tolist() == pytest.approx([1.0, 2.0])


def test_sign_shrink_keeps_the_large_entries():
    shrunk = sign_shrink(np.array([3.0, -1.0, 0.5, -4.0]))
    assert shrunk.tolist() == [1.0, 0.0, 0.0, -2.0]


def test_whole_space_has_full_distortion():
    bound = distortion_lower_bound(kernel_basis(SignCheckMatrix.empty(16)), budget=50)
    assert bound.lower == pytest.approx(4.0)
    assert bound.witness_sparsity == 1


def test_lower_bound_is_witnessed():
    B = kernel_basis(random_sign_matrix(6, 24, seed=2))
    bound = distortion_lower_bound(B, budget=400, seed=1)
    witness = np.array(bound.witness)
    assert B.contains(witness)
    assert np.linalg.norm(witness) == pytest.approx(1.0)
    assert 1.0 <= bound.lower <= math.sqrt(24)
    assert bound.lower == pytest.approx(distortion_ratio(witness)[0])


def test_lower_bound_is_deterministic():
    B = kernel_basis(random_sign_matrix(5, 20, seed=8))
    assert distortion_lower_bound(B, budget=200, seed=4) == distortion_lower_bound(B, budget=200, seed=4)


def test_empty_subspace_has_no_witness():
    square = SignCheckMatrix.from_dense(np.array([[1, 1], [1, -1]]))
    bound = distortion_lower_bound(kernel_basis(square))
    assert bound.lower is None and bound.witness is None


def test_sandwich_with_exact_certificate():
    B = kernel_basis(random_sign_matrix(8, 16, seed=3))
    cert = exact_certificate(B, 1)
    lower = distortion_lower_bound(B, budget=400, seed=0)
    sandwich = distortion_sandwich(lower, spread_to_distortion(cert, 16))
    assert sandwich.lower <= sandwich.upper
    assert distortion_sandwich(lower, None) is lower


def test_inverted_sandwich_is_rejected():
    with pytest.raises(ValueError):
        DistortionBound(N=16, lower=3.0, upper=2.0)
    with pytest.raises(ValueError):
        DistortionBound(N=16, lower=0.5)


def test_lower_bound_depends_only_on_the_subspace(rng):
    A = random_sign_matrix(6, 24, seed=5)
    B = kernel_basis(A)
    negated = kernel_basis(SignCheckMatrix.from_dense(-A.to_dense()))
    Q, _ = np.linalg.qr(rng.standard_normal((B.dim, B.dim)))
    rotated = KernelBasis(B.N, B.vectors @ Q)
    expected = distortion_lower_bound(B, budget=300, seed=2).lower
    assert distortion_lower_bound(negated, budget=300, seed=2).lower == pytest.approx(expected, rel=1e-6)
    assert distortion_lower_bound(rotated, budget=300, seed=2).lower == pytest.approx(expected, rel=1e-6)


def test_witness_survives_coordinate_permutation(rng):
    A = random_sign_matrix(6, 24, seed=6)
    perm = rng.permutation(24)
    B, moved = kernel_basis(A), kernel_basis(A.permute_columns(perm))
    for source, target, forward in ((B, moved, True), (moved, B, False)):
        bound = distortion_lower_bound(source, budget=300, seed=3)
        witness = np.array(bound.witness)
        image = np.empty(24)
        if forward:
            image[perm] = witness
        else:
            image = witness[perm]
        assert target.contains(image)
        assert distortion_ratio(image)[0] == pytest.approx(bound.lower)
        assert distortion_ratio(-2.5 * image)[0] == pytest.approx(bound.lower)
