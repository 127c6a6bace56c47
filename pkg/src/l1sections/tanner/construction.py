# src/l1sections/tanner/construction.py
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..analysis.certificates import ANCHOR, iterated_pushdown
from ..analysis.kernel import dense_rank
from ..constants import BentFamilyKind
from ..exceptions import DomainError, ParameterInfeasibleError
from ..expanders.graphs import BipartiteGraph
from ..expanders.sum_product import build_sum_product
from ..kerdock.mub import local_subspace, max_columns
from ..types import SpreadCertificate, TheoryGuard
from .check_matrix import RowBlock, SignCheckMatrix

logger = logging.getLogger(__name__)


def tanner_check_matrix(G: BipartiteGraph, inner: SignCheckMatrix, label: Optional[str] = None) -> SignCheckMatrix:
    """
    X(G, L) = {x : x restricted to Gamma(j) lies in L for every right vertex j}.
    Right vertex j contributes rows j*k .. j*k + k-1: the inner rows placed on
    the columns Gamma(j) in ascending order.
    """
    if inner.cols != G.d:
        raise DomainError(f"inner check matrix has {inner.cols} columns, right degree is {G.d}")
    k = inner.rows
    if k == 0:
        return SignCheckMatrix.empty(G.N)
    j = np.arange(G.n)
    rows = (j[:, None] * k + inner.row_index[None, :]).ravel()
    cols = G.adjacency[:, inner.col_index].ravel()
    signs = np.tile(inner.signs, G.n)
    inner_label = inner.blocks[0].label if inner.blocks else "inner"
    label = label or f"tanner graph=({G.N},{G.n},{G.D},{G.d}) inner={inner_label}"
    return SignCheckMatrix(G.n * k, G.N, rows, cols, signs, (RowBlock(0, G.n * k, label),))


@dataclass(frozen=True)
class CodimensionReport:
    N: int
    n: int
    d: int
    inner_dim: int
    kernel_dim: int

    @property
    def bound(self) -> int:
        """dim X(G, L) >= N - (d - dim L) n."""
        return self.N - (self.d - self.inner_dim) * self.n

    @property
    def holds(self) -> bool:
        return self.kernel_dim >= self.bound

    @property
    def equality(self) -> bool:
        return self.kernel_dim == self.bound


def codimension_report(G: BipartiteGraph, inner: SignCheckMatrix) -> CodimensionReport:
    """Dense-rank kernel dimensions of L and X(G, L)."""
    inner_dim = inner.cols - dense_rank(inner.to_dense())
    outer = tanner_check_matrix(G, inner)
    kernel_dim = outer.cols - dense_rank(outer.to_dense())
    return CodimensionReport(N=G.N, n=G.n, d=G.d, inner_dim=inner_dim, kernel_dim=kernel_dim)


@dataclass(frozen=True)
class BoostedSubspace:
    check: SignCheckMatrix
    certificate: SpreadCertificate
    k: int
    d: int
    n: int
    guards: Tuple[TheoryGuard, ...] = ()


def largest_power_of_four_at_most(x: float) -> int:
    if x < 1:
        return 0
    k = 1
    while 4 * k <= x:
        k *= 4
    return k


def boost_sum_product(
    N: int,
    eta: float,
    beta0: float = 0.05,
    min_eta: float = 1 / 64,
    xi0: float = 0.0,
    kind: BentFamilyKind = BentFamilyKind.KERDOCK,
) -> BoostedSubspace:
    """
    X(G, L) for the sum-product graph G (d ~ N^(2/3)) and the Kerdock inner
    space L with k the largest power of 4 not above eta d / 8. Rows <= eta N.
    """
    if not 0 < eta <= 1:
        raise DomainError(f"eta must lie in (0, 1], got {eta}")
    if eta < min_eta:
        raise ParameterInfeasibleError(f"eta={eta} below the configured minimum {min_eta}", guard="eta >= min_eta")
    G, profile = build_sum_product(N, xi0=xi0)
    k = largest_power_of_four_at_most(eta * G.d / 8)
    if k < 4 or not k <= G.d <= min(max_columns(k, kind), k * k // 2):
        raise ParameterInfeasibleError(
            f"infeasible parameters at this scale: N={N}, eta={eta}, d={G.d}, k={k}",
            guard="4 <= k <= d <= k^2/2 with k <= eta d / 8",
        )
    inner_check, inner_cert = local_subspace(k, G.d, kind)
    check = tanner_check_matrix(G, inner_check, label=f"boost N={N} eta={eta:g} k={k} d={G.d}")
    if check.rows > eta * N:
        raise ParameterInfeasibleError(f"boosted space uses {check.rows} rows > eta N = {eta * N:g}")
    steps = math.ceil(1 / beta0)
    certificate = iterated_pushdown(profile, inner_cert, G.D, steps, T0=ANCHOR)
    guards = (
        TheoryGuard(
            name="eta >= N^(-2 beta0/3)",
            held=eta >= N ** (-2 * beta0 / 3),
            detail=f"eta={eta:g}, N^(-2beta0/3)={N ** (-2 * beta0 / 3):.4g}",
        ),
        TheoryGuard(name="k <= eta d / 8", held=k <= eta * G.d / 8, detail=f"k={k}, d={G.d}"),
    )
    for guard in guards:
        if not guard.held:
            logger.warning(f"Theory guard '{guard.name}' failed: {guard.detail}")
    logger.info(
        f"boost_sum_product: N={N}, eta={eta:g}, k={k}, d={G.d}, n={G.n}, rows={check.rows}, "
        f"certificate=({certificate.t:g}, {certificate.T:g}, {certificate.eps:.4g})"
    )
    return BoostedSubspace(check=check, certificate=certificate, k=k, d=G.d, n=G.n, guards=guards)
