# src/l1sections/tanner/check_matrix.py
import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from ..exceptions import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RowBlock:
    """Rows [start, stop) and a note on what produced them."""

    start: int
    stop: int
    label: str

    @property
    def size(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True, eq=False)
class SignCheckMatrix:
    """
    Sparse {+1, -1} matrix stored as triplets sorted by (row, col).
    Its kernel is the subspace it represents.
    """

    rows: int
    cols: int
    row_index: np.ndarray = field(repr=False)
    col_index: np.ndarray = field(repr=False)
    signs: np.ndarray = field(repr=False)
    blocks: Tuple[RowBlock, ...] = ()

    def __post_init__(self):
        row_index = np.asarray(self.row_index, dtype=np.int64)
        col_index = np.asarray(self.col_index, dtype=np.int64)
        signs = np.asarray(self.signs, dtype=np.int8)
        if not (row_index.shape == col_index.shape == signs.shape) or row_index.ndim != 1:
            raise DomainError("triplet arrays must be one-dimensional and of equal length")
        if self.rows < 0 or self.cols < 1:
            raise DomainError(f"invalid shape {self.rows}x{self.cols}")
        if row_index.size:
            if row_index.min() < 0 or row_index.max() >= self.rows:
                raise DomainError("row index out of range")
            if col_index.min() < 0 or col_index.max() >= self.cols:
                raise DomainError("column index out of range")
            keys = row_index * self.cols + col_index
            if np.any(np.diff(keys) <= 0):
                raise DomainError("entries must be sorted by (row, col) with distinct columns per row")
            if not np.all(np.abs(signs) == 1):
                raise DomainError("entries must be +1 or -1")
        if np.unique(row_index).size != self.rows:
            raise DomainError("every row must be nonempty")
        blocks = self.blocks or ((RowBlock(0, self.rows, "matrix"),) if self.rows else ())
        expected = 0
        for block in blocks:
            if block.start != expected or block.stop < block.start:
                raise DomainError(f"row blocks must partition the rows, got {block}")
            expected = block.stop
        if expected != self.rows:
            raise DomainError("row blocks do not cover every row")
        for name, arr in (("row_index", row_index), ("col_index", col_index), ("signs", signs)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "blocks", tuple(blocks))

    @property
    def nnz(self) -> int:
        return int(self.signs.size)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @classmethod
    def from_dense(cls, matrix: np.ndarray, label: str = "matrix") -> "SignCheckMatrix":
        """Nonzero entries of a dense sign matrix; zero rows are dropped."""
        matrix = np.asarray(matrix)
        if matrix.ndim != 2:
            raise DomainError("dense matrix must be two-dimensional")
        keep = np.flatnonzero(np.any(matrix != 0, axis=1))
        matrix = matrix[keep]
        rows, cols = np.nonzero(matrix)
        values = np.sign(matrix[rows, cols]).astype(np.int8)
        if not np.all(np.abs(matrix[rows, cols]) == 1):
            raise DomainError("dense matrix entries must be 0, +1 or -1")
        blocks = (RowBlock(0, matrix.shape[0], label),) if matrix.shape[0] else ()
        return cls(matrix.shape[0], matrix.shape[1], rows, cols, values, blocks)

    @classmethod
    def empty(cls, cols: int) -> "SignCheckMatrix":
        """No constraints: the kernel is all of R^cols."""
        zero = np.zeros(0, dtype=np.int64)
        return cls(0, cols, zero, zero, zero.astype(np.int8), ())

    def to_sparse(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.signs.astype(np.float64), (self.row_index, self.col_index)), shape=self.shape
        )

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int8)
        out[self.row_index, self.col_index] = self.signs
        return out

    def relabel(self, label: str) -> "SignCheckMatrix":
        blocks = (RowBlock(0, self.rows, label),) if self.rows else ()
        return SignCheckMatrix(self.rows, self.cols, self.row_index, self.col_index, self.signs, blocks)

    def permute_columns(self, permutation: Sequence[int]) -> "SignCheckMatrix":
        """Column j moves to permutation[j]."""
        perm = np.asarray(permutation, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.cols)):
            raise DomainError("not a permutation of the columns")
        cols = perm[self.col_index]
        order = np.lexsort((cols, self.row_index))
        return SignCheckMatrix(
            self.rows, self.cols, self.row_index[order], cols[order], self.signs[order], self.blocks
        )


def stack(*matrices: SignCheckMatrix) -> SignCheckMatrix:
    """Rows of all matrices on top of one another; the kernel is the intersection."""
    if not matrices:
        raise DomainError("nothing to stack")
    cols = matrices[0].cols
    if any(m.cols != cols for m in matrices):
        raise DomainError(f"column counts differ: {[m.cols for m in matrices]}")
    offset = 0
    row_parts, col_parts, sign_parts, blocks = [], [], [], []
    for m in matrices:
        row_parts.append(m.row_index + offset)
        col_parts.append(m.col_index)
        sign_parts.append(m.signs)
        blocks.extend(RowBlock(b.start + offset, b.stop + offset, b.label) for b in m.blocks)
        offset += m.rows
    logger.debug(f"Stacked {len(matrices)} matrices into {offset} rows over {cols} columns")
    return SignCheckMatrix(
        offset,
        cols,
        np.concatenate(row_parts),
        np.concatenate(col_parts),
        np.concatenate(sign_parts),
        tuple(blocks),
    )
