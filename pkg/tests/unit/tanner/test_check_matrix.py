# tests/unit/tanner/test_check_matrix.py
import numpy as np
import pytest

from l1sections.analysis.kernel import dense_rank, kernel_basis
from l1sections.analysis.random_kernel import random_sign_matrix
from l1sections.exceptions import DomainError
from l1sections.tanner.check_matrix import RowBlock, SignCheckMatrix, stack


def test_from_dense_drops_zero_rows():
    dense = np.array([[1, 0, -1], [0, 0, 0], [0, -1, 1]], dtype=np.int8)
    A = SignCheckMatrix.from_dense(dense, label="two rows")
    assert A.shape == (2, 3)
    assert A.nnz == 4
    assert A.to_dense().tolist() == [[1, 0, -1], [0, -1, 1]]
    assert A.blocks == (RowBlock(0, 2, "two rows"),)


def test_from_dense_rejects_other_values():
    with pytest.raises(DomainError):
        SignCheckMatrix.from_dense(np.array([[2, 1]]))


def test_triplet_validation():
    with pytest.raises(DomainError, match="sorted"):
        SignCheckMatrix(1, 3, np.array([0, 0]), np.array([2, 1]), np.array([1, 1]))
    with pytest.raises(DomainError, match="nonempty"):
        SignCheckMatrix(2, 3, np.array([0]), np.array([1]), np.array([1]))
    with pytest.raises(DomainError, match="\\+1 or -1"):
        SignCheckMatrix(1, 3, np.array([0]), np.array([1]), np.array([0]))
    with pytest.raises(DomainError, match="partition"):
        SignCheckMatrix(1, 3, np.array([0]), np.array([1]), np.array([1]), (RowBlock(1, 1, "x"),))


def test_empty_matrix_has_full_kernel():
    A = SignCheckMatrix.empty(5)
    assert A.shape == (0, 5)
    assert A.to_sparse().shape == (0, 5)
    assert A.blocks == ()


def test_stack_keeps_block_labels(all_ones_row):
    other = SignCheckMatrix.from_dense(np.array([[1, -1, 0, 0], [0, 0, 1, -1]]), label="pairs")
    S = stack(all_ones_row, other)
    assert S.shape == (3, 4)
    assert [(b.start, b.stop, b.label) for b in S.blocks] == [(0, 1, "all ones"), (1, 3, "pairs")]
    assert np.array_equal(S.to_dense()[1:], other.to_dense())


def test_stack_rejects_mismatched_columns(all_ones_row):
    with pytest.raises(DomainError, match="column counts"):
        stack(all_ones_row, SignCheckMatrix.empty(3))
    with pytest.raises(DomainError):
        stack()


def test_permute_columns_and_relabel(rng):
    dense = np.where(rng.random((3, 5)) < 0.5, -1, 1)
    A = SignCheckMatrix.from_dense(dense)
    perm = [4, 0, 3, 1, 2]
    moved = A.permute_columns(perm).to_dense()
    for j, target in enumerate(perm):
        assert np.array_equal(moved[:, target], dense[:, j])
    assert A.relabel("renamed").blocks[0].label == "renamed"
    with pytest.raises(DomainError):
        A.permute_columns([0, 0, 1, 2, 3])


def test_stacking_intersects_kernels():
    for seed in range(20):
        A1 = random_sign_matrix(3, 10, seed=seed)
        A2 = random_sign_matrix(4, 10, seed=100 + seed)
        K1, K2, K = kernel_basis(A1), kernel_basis(A2), kernel_basis(stack(A1, A2))
        # dim(K1 n K2) = dim K1 + dim K2 - dim(K1 + K2)
        assert K.dim == K1.dim + K2.dim - dense_rank(np.hstack([K1.vectors, K2.vectors]))
        assert K.dim == 10 - dense_rank(np.vstack([A1.to_dense(), A2.to_dense()]))
        for A in (A1, A2):
            assert np.max(np.abs(A.to_dense() @ K.vectors), initial=0.0) <= 1e-9
