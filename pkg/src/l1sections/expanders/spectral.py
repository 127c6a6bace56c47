# src/l1sections/expanders/spectral.py
import logging
import math
from typing import Tuple

import numpy as np

from ..algebra.primes import balanced_prime_pq, lps_vertex_count
from ..constants import EIGEN_TOLERANCE, ProfileKind
from ..exceptions import DomainError, VerificationError
from .graphs import BipartiteGraph, Graph, LeftRegularGraph
from .lps import build_lps, second_eigenvalue
from .profile import ProfileBound
from .regularize import right_regularize

logger = logging.getLogger(__name__)


def incidence_left_regular(Y: Graph) -> LeftRegularGraph:
    """Left vertices are the edges of Y in Y.factored_edges() order, each adjacent to its two endpoints."""
    return LeftRegularGraph(Y.edge_count, Y.vertices, 2, Y.factored_edges())


def edge_vertex_incidence(Y: Graph) -> BipartiteGraph:
    """(|E|, |V|, 2, deg)-right regular graph: edge e ~ vertex v iff v is an endpoint of e."""
    H = incidence_left_regular(Y)
    adjacency = np.vstack(H.right_lists())
    if adjacency.shape != (Y.vertices, Y.degree):
        raise DomainError("edge-vertex incidence needs a degree-regular graph")
    return BipartiteGraph(N=H.N, n=H.n, D=2, d=Y.degree, adjacency=adjacency)


def expected_spectral_degree(N: int, d: int) -> int:
    """Right degree build_spectral_expander(N, d) realizes, without building the graph."""
    p, q = balanced_prime_pq(d, N)
    vertices = lps_vertex_count(p, q)
    if N >= vertices:
        return min(p + 1, -(-2 * N // vertices))
    # part of one 2-factor: paths, so degree at most 2
    return 2


def build_spectral_expander(
    N: int,
    d: int,
    verify_spectrum: bool = False,
    max_vertices: int = 20000,
) -> Tuple[BipartiteGraph, ProfileBound]:
    """
    LPS incidence graph with the highest-numbered edges deleted down to N,
    isolated vertices dropped, then right-regularized (left degree <= 4).

    Edges are numbered 2-factor by 2-factor, so the N survivors meet every
    vertex of Y between 2N/|V| - 2 and 2N/|V| + 2 times and, once N >= |V|, the
    realized right degree is ceil(2N/|V|). (p, q) comes from balanced_prime_pq.

    The profile bound uses the degree p+1 and edge count N' of the full
    incidence graph: deleting left vertices and splitting right vertices
    never shrinks a neighbourhood.
    """
    if d < 5 or N < d:
        raise DomainError(f"spectral expander needs d >= 5 and N >= d, got N={N}, d={d}")
    p, q = balanced_prime_pq(d, N)
    Y = build_lps(p, q, max_vertices=max_vertices)
    if verify_spectrum:
        lambda2 = second_eigenvalue(Y)
        if lambda2 > 2 * math.sqrt(p) + EIGEN_TOLERANCE:
            raise VerificationError(f"LPS({p},{q}) has lambda2={lambda2:.6f} > 2 sqrt(p)")
    H = incidence_left_regular(Y)
    full_edges = H.N
    H = H.restrict_left(N).drop_isolated_right()
    G = right_regularize(H)
    bound = ProfileBound(
        ProfileKind.SPECTRAL, G.N, G.n, G.d,
        {"d_Y": p + 1, "N_Y": full_edges, "p": p, "q": q},
    )
    logger.info(
        f"Spectral expander: N={N}, target d={d}, p={p}, q={q}, realized (n, D, d)=({G.n}, {G.D}, {G.d})"
    )
    return G, bound
