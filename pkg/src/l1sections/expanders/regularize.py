# src/l1sections/expanders/regularize.py
import heapq
import logging

import numpy as np

from ..exceptions import VerificationError
from .graphs import BipartiteGraph, LeftRegularGraph

logger = logging.getLogger(__name__)


def right_regularize(H: LeftRegularGraph) -> BipartiteGraph:
    """
    Splits every right vertex of degree d_v into floor(d_v/d) vertices of degree d
    (consecutive ascending slices of its neighbourhood) plus, when d does not
    divide d_v, one vertex holding the r_v leftover edges padded with d - r_v
    filler edges. Filler goes to the left vertices with the fewest filler
    edges so far, ties by index. d = ceil(N D / n); the result has at most 2n
    right vertices and left degree at most 2D.
    """
    N, n, D = H.N, H.n, H.D
    d = -(-N * D // n)
    rows = []
    added = np.zeros(N, dtype=np.int64)
    heap = [(0, i) for i in range(N)]
    heapq.heapify(heap)
    filler = 0

    for members in H.right_lists():
        full, rest = divmod(members.size, d)
        for c in range(full):
            rows.append(members[c * d:(c + 1) * d])
        if rest == 0:
            continue
        leftover = members[full * d:]
        taken = set(leftover.tolist())
        chosen, skipped = [], []
        while len(chosen) < d - rest:
            count, i = heapq.heappop(heap)
            if i in taken:
                skipped.append((count, i))
                continue
            chosen.append(i)
        for i in chosen:
            added[i] += 1
            heapq.heappush(heap, (int(added[i]), i))
        for item in skipped:
            heapq.heappush(heap, item)
        filler += len(chosen)
        rows.append(np.sort(np.concatenate([leftover, np.array(chosen, dtype=np.int64)])))

    adjacency = np.vstack(rows) if rows else np.zeros((0, d), dtype=np.int64)
    degrees = np.bincount(adjacency.ravel(), minlength=N)
    if degrees.max() > 2 * D:
        raise VerificationError(f"regularized left degree {degrees.max()} exceeds 2D={2 * D}")
    if adjacency.shape[0] > 2 * n:
        raise VerificationError(f"regularization produced {adjacency.shape[0]} > 2n right vertices")
    logger.debug(
        f"right_regularize: N={N}, n={n} -> {adjacency.shape[0]}, D={D}, d={d}, filler edges={filler}"
    )
    return BipartiteGraph(N=N, n=adjacency.shape[0], D=2 * D, d=d, adjacency=adjacency)
