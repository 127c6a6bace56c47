# src/l1sections/expanders/graphs.py
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ..exceptions import DomainError, VerificationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LeftRegularGraph:
    """Bipartite graph given by left adjacency; every left vertex has D distinct neighbours."""

    N: int
    n: int
    D: int
    left_neighbors: np.ndarray = field(repr=False)

    def __post_init__(self):
        nbrs = np.asarray(self.left_neighbors, dtype=np.int64)
        if nbrs.ndim != 2 or nbrs.shape != (self.N, self.D):
            raise DomainError(f"H is not left-regular with degree {self.D} on {self.N} vertices")
        if self.n < 1:
            raise DomainError("a bipartite graph needs at least one right vertex")
        if nbrs.size and (nbrs.min() < 0 or nbrs.max() >= self.n):
            raise DomainError("right index out of range")
        ordered = np.sort(nbrs, axis=1)
        if self.D > 1 and np.any(ordered[:, 1:] == ordered[:, :-1]):
            raise DomainError("H has multiple edges")
        ordered.setflags(write=False)
        object.__setattr__(self, "left_neighbors", ordered)

    @classmethod
    def from_lists(cls, n: int, lists: Sequence[Sequence[int]]) -> "LeftRegularGraph":
        degrees = {len(row) for row in lists}
        if len(degrees) != 1:
            raise DomainError(f"H is not left-regular: left degrees {sorted(degrees)}")
        return cls(len(lists), n, degrees.pop(), np.array(lists, dtype=np.int64).reshape(len(lists), -1))

    def right_lists(self) -> List[np.ndarray]:
        """Ascending left neighbours of each right vertex."""
        lefts = np.repeat(np.arange(self.N), self.D)
        rights = self.left_neighbors.ravel()
        order = np.lexsort((lefts, rights))
        counts = np.bincount(rights, minlength=self.n)
        return np.split(lefts[order], np.cumsum(counts)[:-1])

    def drop_isolated_right(self) -> "LeftRegularGraph":
        used = np.zeros(self.n, dtype=bool)
        used[self.left_neighbors.ravel()] = True
        if used.all():
            return self
        relabel = np.cumsum(used) - 1
        return LeftRegularGraph(self.N, int(used.sum()), self.D, relabel[self.left_neighbors])

    def restrict_left(self, count: int) -> "LeftRegularGraph":
        """Keep left vertices [0, count)."""
        if not 1 <= count <= self.N:
            raise DomainError(f"cannot keep {count} of {self.N} left vertices")
        return LeftRegularGraph(count, self.n, self.D, self.left_neighbors[:count])


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """(N, n, D, d)-right regular graph; row j of `adjacency` is Gamma(j), ascending."""

    N: int
    n: int
    D: int
    d: int
    adjacency: np.ndarray = field(repr=False)

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=np.int64)
        if adj.shape != (self.n, self.d):
            raise DomainError(f"adjacency shape {adj.shape} does not match n={self.n}, d={self.d}")
        if adj.size:
            if adj.min() < 0 or adj.max() >= self.N:
                raise DomainError("left index out of range")
            if self.d > 1 and np.any(np.diff(adj, axis=1) <= 0):
                raise DomainError("each Gamma(j) must be strictly ascending (no multiple edges)")
        if self.max_left_degree_of(adj) > self.D:
            raise DomainError(f"left degree {self.max_left_degree_of(adj)} exceeds D={self.D}")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    def max_left_degree_of(self, adj: np.ndarray) -> int:
        if adj.size == 0:
            return 0
        return int(np.bincount(adj.ravel(), minlength=self.N).max())

    @property
    def header(self) -> Tuple[int, int, int, int]:
        return self.N, self.n, self.D, self.d

    @cached_property
    def left_degrees(self) -> np.ndarray:
        return np.bincount(self.adjacency.ravel(), minlength=self.N)

    @property
    def max_left_degree(self) -> int:
        return int(self.left_degrees.max()) if self.N else 0

    @cached_property
    def left_lists(self) -> List[np.ndarray]:
        rights = np.repeat(np.arange(self.n), self.d)
        lefts = self.adjacency.ravel()
        order = np.lexsort((rights, lefts))
        return np.split(rights[order], np.cumsum(self.left_degrees)[:-1])

    @cached_property
    def incidence(self) -> sp.csr_matrix:
        """N x n 0/1 matrix, entry (i, j) = 1 iff i in Gamma(j)."""
        rights = np.repeat(np.arange(self.n), self.d)
        data = np.ones(rights.size, dtype=np.int8)
        return sp.csr_matrix((data, (self.adjacency.ravel(), rights)), shape=(self.N, self.n))

    def neighborhood_size(self, left_subset: Sequence[int]) -> int:
        subset = np.asarray(left_subset, dtype=np.int64)
        if subset.size == 0:
            return 0
        return int(np.unique(np.concatenate([self.left_lists[i] for i in subset])).size)

    def relabel_left(self, permutation: Sequence[int]) -> "BipartiteGraph":
        """Left vertex i becomes permutation[i]."""
        perm = np.asarray(permutation, dtype=np.int64)
        return BipartiteGraph(self.N, self.n, self.D, self.d, np.sort(perm[self.adjacency], axis=1))


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Simple undirected degree-regular graph; row v of `adjacency` lists
    neighbours of v, ascending. `factors`, when given, splits the edges into
    degree/2 perfect 2-factors: column j maps v to its successor in factor j,
    so {v, factors[v, j]} over all v lists factor j once.
    """

    vertices: int
    adjacency: np.ndarray = field(repr=False)
    degree: int
    factors: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        adj = np.sort(np.asarray(self.adjacency, dtype=np.int64), axis=1)
        if adj.shape != (self.vertices, self.degree):
            raise DomainError(f"graph is not {self.degree}-regular on {self.vertices} vertices")
        if np.any(adj == np.arange(self.vertices)[:, None]):
            raise VerificationError("graph has a self-loop")
        if self.degree > 1 and np.any(np.diff(adj, axis=1) == 0):
            raise VerificationError("graph has multiple edges")
        matrix = self._matrix_of(adj)
        if (matrix != matrix.T).nnz:
            raise VerificationError("adjacency is not symmetric")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        if self.factors is not None:
            object.__setattr__(self, "factors", self._checked_factors(matrix))

    def _matrix_of(self, adj: np.ndarray) -> sp.csr_matrix:
        rows = np.repeat(np.arange(self.vertices), self.degree)
        data = np.ones(rows.size, dtype=np.float64)
        return sp.csr_matrix((data, (rows, adj.ravel())), shape=(self.vertices, self.vertices))

    def _checked_factors(self, matrix: sp.csr_matrix) -> np.ndarray:
        succ = np.asarray(self.factors, dtype=np.int64)
        if self.degree % 2 or succ.shape != (self.vertices, self.degree // 2):
            raise DomainError(f"a {self.degree}-regular graph cannot carry these 2-factors")
        if any(np.unique(column).size != self.vertices for column in succ.T):
            raise VerificationError("a 2-factor successor map is not a permutation")
        v = np.repeat(np.arange(self.vertices), succ.shape[1])
        w = succ.ravel()
        if not np.all(np.asarray(matrix[v, w]).ravel()):
            raise VerificationError("2-factor uses a non-edge")
        keys = np.minimum(v, w) * self.vertices + np.maximum(v, w)
        if np.unique(keys).size != self.edge_count:
            raise VerificationError("2-factors do not cover every edge exactly once")
        succ.setflags(write=False)
        return succ

    @cached_property
    def adjacency_matrix(self) -> sp.csr_matrix:
        return self._matrix_of(self.adjacency)

    def edges(self) -> np.ndarray:
        """(u, v) with u < v, sorted lexicographically."""
        u = np.repeat(np.arange(self.vertices), self.degree)
        v = self.adjacency.ravel()
        keep = u < v
        pairs = np.column_stack([u[keep], v[keep]])
        return pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]

    def factored_edges(self) -> np.ndarray:
        """
        (u, v) with u < v, one 2-factor after another and by ascending tail
        within a factor; lexicographic when the graph carries no factors.
        In any prefix of this order the vertex degrees differ by at most two.
        """
        if self.factors is None:
            return self.edges()
        v = np.arange(self.vertices)
        blocks = [np.sort(np.column_stack([v, self.factors[:, j]]), axis=1) for j in range(self.factors.shape[1])]
        return np.vstack(blocks)

    @property
    def edge_count(self) -> int:
        return self.vertices * self.degree // 2

    def is_connected(self) -> bool:
        count, _ = connected_components(self.adjacency_matrix, directed=False)
        return count == 1

    def induced_edge_count(self, subset: Sequence[int]) -> int:
        mask = np.zeros(self.vertices, dtype=bool)
        mask[np.asarray(subset, dtype=np.int64)] = True
        inside = mask[self.adjacency] & mask[:, None]
        return int(inside.sum()) // 2


def cycle_graph(n: int) -> Graph:
    """C_n; the triangle is cycle_graph(3)."""
    if n < 3:
        raise DomainError("a cycle needs at least three vertices")
    v = np.arange(n)
    return Graph(n, np.column_stack([(v - 1) % n, (v + 1) % n]), 2)
