# src/l1sections/tanner/assembly.py
"""Top-level assemblies.

``assemble_theorem1`` is fully deterministic: one X(G_i, L_i) level per
schedule point t_i, with G_i a spectral graph of right degree about N/t_i
(a single right vertex once N/t_i >= N) and L_i from sum-product boosting,
or the Kerdock space when boosting does not fit, stacked. ``assemble_theorem2``
uses one spectral graph and a seeded k x d sign matrix as inner space, and
reports the random bits it consumed.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import comb

from ..algebra.primes import balanced_prime_pq, lps_vertex_count, primes_one_mod_four
from ..analysis.certificates import ANCHOR, compose_certificates, iterated_pushdown, pushdown_certificate
from ..analysis.kernel import kernel_basis
from ..analysis.spread import exact_spread
from ..constants import AssemblyMode, BentFamilyKind, Provenance
from ..exceptions import DomainError, NumericalGuardError, ParameterInfeasibleError, VerificationError
from ..expanders.graphs import BipartiteGraph
from ..expanders.spectral import build_spectral_expander, expected_spectral_degree
from ..kerdock.mub import local_subspace, max_columns
from ..types import AssemblyLevel, AssemblySchedule, SpreadCertificate, TheoryGuard
from ..utils.bitstream import SignBitStream
from .check_matrix import SignCheckMatrix, stack
from .construction import boost_sum_product, tanner_check_matrix
from .schedule import build_schedule, clamped_loglog

logger = logging.getLogger(__name__)

VACUOUS = SpreadCertificate(t=0.0, T=0.0, eps=1.0, provenance=Provenance.PROVED_ARITHMETIC,
                            trail=("vacuous",), notes=("vacuous",))


@dataclass(frozen=True)
class Assembly:
    check: SignCheckMatrix
    certificate: SpreadCertificate
    mode: AssemblyMode
    schedule: Optional[AssemblySchedule] = None
    random_bit_count: int = 0
    guards: Tuple[TheoryGuard, ...] = ()
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def rows(self) -> int:
        return self.check.rows


@dataclass(frozen=True)
class LevelSettings:
    """Everything a schedule level needs besides its own t_i and the running budget."""

    N: int
    schedule: AssemblySchedule
    beta0: float = 0.05
    min_eta: float = 1 / 64
    xi0: float = 0.0
    kind: BentFamilyKind = BentFamilyKind.KERDOCK
    degree_slack: int = 4
    max_inner_k: int = 256
    max_lps_vertices: int = 20000


def star_graph(N: int) -> BipartiteGraph:
    """(N, 1, 1, N): one right vertex seeing every coordinate, so X(G, L) = L."""
    return BipartiteGraph(N=N, n=1, D=1, d=N, adjacency=np.arange(N)[None, :])


def trivial_level_certificate(t: float, T: float) -> SpreadCertificate:
    """(t, T, 1) holds for every subspace once floor(T) <= floor(t): removing T coordinates removes no more than the worst t."""
    if math.floor(T) > math.floor(t):
        raise DomainError(f"(t={t:g}, T={T:g}, 1) is not trivially true")
    return SpreadCertificate(t=t, T=T, eps=1.0, provenance=Provenance.PROVED_ARITHMETIC,
                             trail=(f"trivial(t={t:g},T={T:g})",))


def _kerdock_inner(d: int, n: int, remaining: int, kind: BentFamilyKind, max_k: int):
    """Largest power of 4 k <= max_k with k < d <= numBases*k and k n <= remaining."""
    chosen = None
    k = 4
    while k < d and k <= max_k and k * n <= remaining:
        if d <= max_columns(k, kind):
            chosen = k
        k *= 4
    if chosen is None:
        return None
    check, cert = local_subspace(chosen, d, kind)
    return check, cert, {"inner": "kerdock", "k": chosen, "d": d}


def _inner_space(d: int, n: int, remaining: int, settings: LevelSettings, level: int):
    """Sum-product boosting at dimension d with eta_tilde, else the Kerdock space."""
    try:
        boosted = boost_sum_product(d, settings.schedule.eta_tilde, beta0=settings.beta0,
                                    min_eta=settings.min_eta, xi0=settings.xi0, kind=settings.kind)
        if boosted.check.rows * n <= remaining:
            return boosted.check, boosted.certificate, {"inner": "boosted", "k": boosted.k, "d": boosted.d,
                                                        "n": boosted.n}
        logger.debug(f"Level {level}: boosted inner needs {boosted.check.rows * n} rows, {remaining} left")
    except (ParameterInfeasibleError, DomainError) as e:
        logger.debug(f"Level {level}: sum-product boosting unavailable at d={d}: {e}")
    return _kerdock_inner(d, n, remaining, settings.kind, settings.max_inner_k)


def _level_error(i: int, t: float, d_target: int, reason: str, guard: str) -> ParameterInfeasibleError:
    return ParameterInfeasibleError(f"level {i} (t_i={t:.6g}, target d={d_target}): {reason}", guard=guard, level=i)


def _build_level(i: int, t: float, remaining: int, current_T: float,
                 settings: LevelSettings) -> Tuple[AssemblyLevel, SignCheckMatrix, Optional[SpreadCertificate]]:
    """
    Builds X(G_i, L_i) for schedule point t_i within `remaining` rows, or
    raises ParameterInfeasibleError naming the level.
    """
    N = settings.N
    d_target = math.ceil(N / t)
    if d_target >= N:
        G, profile = star_graph(N), None
    else:
        try:
            reach = expected_spectral_degree(N, d_target)
        except (ParameterInfeasibleError, DomainError) as e:
            raise _level_error(i, t, d_target, f"no spectral graph: {e}", "d_i >= 5") from e
        needed = max(5, math.ceil(d_target / settings.degree_slack))
        if reach < needed:
            raise _level_error(
                i, t, d_target,
                f"spectral graphs on N={N} edges reach right degree {reach} < {needed}",
                f"realized d >= d_i / {settings.degree_slack}",
            )
        try:
            G, profile = build_spectral_expander(N, d_target, max_vertices=settings.max_lps_vertices)
        except (ParameterInfeasibleError, NumericalGuardError, DomainError) as e:
            raise _level_error(i, t, d_target, f"spectral graph: {e}", "LPS graph within max_lps_vertices") from e

    inner = _inner_space(G.d, G.n, remaining, settings, i)
    if inner is None:
        raise _level_error(
            i, t, d_target,
            f"no inner space on d={G.d} with codimension <= {remaining // max(G.n, 1)} ({remaining} rows left)",
            "inner rows * n <= remaining budget",
        )
    inner_check, inner_cert, inner_info = inner
    check = tanner_check_matrix(
        G, inner_check,
        label=f"level {i}: t_i={t:.6g} graph=({G.N},{G.n},{G.D},{G.d}) inner={inner_info['inner']} k={inner_info['k']}",
    )
    if profile is None:
        # X(star, L) = L, so L's own certificate starts the chain
        step = inner_cert if current_T <= ANCHOR else None
    else:
        step = pushdown_certificate(profile, inner_cert, G.D, current_T) if current_T <= N else None
    record = AssemblyLevel(
        index=i, t=t, status="built", graph={"N": G.N, "n": G.n, "D": G.D, "d": G.d},
        inner={"target_d": d_target, **inner_info}, rows=check.rows, kept=True, certificate=step,
    )
    logger.debug(f"Level {i} (t={t:.4g}): graph=({G.N},{G.n},{G.D},{G.d}), {inner_info}, rows={check.rows}")
    return record, check, step


def assemble_theorem1(
    N: int,
    eta: float,
    beta0: float = 0.05,
    epsilon: float = 1 / 16,
    delta: float = 0.25,
    min_N: int = 256,
    kind: BentFamilyKind = BentFamilyKind.KERDOCK,
    xi0: float = 0.0,
    min_eta: float = 1 / 64,
    degree_slack: int = 4,
    max_inner_k: int = 256,
    max_lps_vertices: int = 20000,
    max_levels: int = 1000,
    strict: bool = True,
) -> Assembly:
    """
    Deterministic stack of one X(G_i, L_i) level per schedule interval
    [t_i, t_(i+1)], within the row budget floor(eta N).

    An interval with floor(t_(i+1)) <= floor(t_i) is trivially (t_i, t_(i+1), 1)
    and one the certified chain already reaches past adds nothing; neither
    costs rows. Every other level is built or, when strict, raises
    ParameterInfeasibleError naming it. With strict=False an unrealizable
    level is recorded as a failed guard instead and the following levels are
    still attempted; the run fails only if no level could be built.
    """
    if N < min_N:
        raise ParameterInfeasibleError(f"N={N} below the configured minimum {min_N}", guard="N >= min_N")
    schedule = build_schedule(N, eta, beta0, epsilon, delta, max_levels=max_levels)
    settings = LevelSettings(N=N, schedule=schedule, beta0=beta0, min_eta=min_eta, xi0=xi0, kind=kind,
                             degree_slack=degree_slack, max_inner_k=max_inner_k, max_lps_vertices=max_lps_vertices)
    budget = math.floor(eta * N)
    remaining = budget
    guards: List[TheoryGuard] = []
    parts: List[SignCheckMatrix] = []
    levels: List[AssemblyLevel] = []
    chain: List[SpreadCertificate] = []
    current_T = ANCHOR
    first_failure: Optional[ParameterInfeasibleError] = None

    for i, (t, t_next) in enumerate(zip(schedule.points, schedule.points[1:])):
        if math.floor(t_next) <= math.floor(t):
            levels.append(AssemblyLevel(index=i, t=t, status="trivial", kept=True,
                                        certificate=trivial_level_certificate(t, t_next)))
            continue
        if current_T >= t_next:
            levels.append(AssemblyLevel(index=i, t=t, status="covered", kept=True))
            continue
        try:
            record, check, step = _build_level(i, t, remaining, current_T, settings)
        except ParameterInfeasibleError as e:
            if strict:
                raise
            first_failure = first_failure or e
            logger.info(f"Skipping {e}")
            guards.append(TheoryGuard(name=f"level {i} realized", held=False, detail=str(e)))
            levels.append(AssemblyLevel(index=i, t=t, status="skipped", inner={"target_d": math.ceil(N / t)}))
            continue
        levels.append(record)
        parts.append(check)
        remaining -= check.rows
        if step is not None and step.useful:
            chain.append(step)
            current_T = step.T
        else:
            guards.append(TheoryGuard(name=f"level {i}: certificate grows T", held=False,
                                      detail=f"T0={current_T:g}"))
        theta = schedule.eta_tilde >= record.graph["d"] ** (-2 * beta0 / 3)
        guards.append(TheoryGuard(name=f"level {i}: eta_tilde >= d^(-2 beta0/3)", held=theta,
                                  detail=f"eta_tilde={schedule.eta_tilde:.4g}, d={record.graph['d']}"))

    if not parts:
        raise ParameterInfeasibleError(
            f"no level of the explicit assembly could be built for N={N}, eta={eta}: {first_failure}",
            guard="one realized schedule level",
            level=first_failure.level if first_failure else None,
        )
    check = stack(*parts)
    if check.rows > eta * N:
        raise VerificationError(f"assembly uses {check.rows} rows > eta N = {eta * N:g}")
    certificate = compose_certificates(chain) if chain else VACUOUS
    guards.append(TheoryGuard(
        name="r <= 4 log2 log2 N + 8",
        held=schedule.r <= 4 * math.log2(max(math.log2(N), 1.0)) + 8,
        detail=f"r={schedule.r}",
    ))
    schedule = schedule.model_copy(update={"levels": levels, "guards": guards})
    built = sum(1 for lv in levels if lv.status == "built")
    skipped = sum(1 for lv in levels if lv.status == "skipped")
    logger.info(
        f"Explicit assembly N={N}, eta={eta:g}: rows={check.rows}/{budget}, r={schedule.r}, "
        f"levels built={built}, skipped={skipped}, "
        f"certificate=({certificate.t:g}, {certificate.T:g}, {certificate.eps:.4g})"
    )
    return Assembly(check=check, certificate=certificate, mode=AssemblyMode.EXPLICIT, schedule=schedule,
                    guards=tuple(guards),
                    details={"budget": budget, "levels_built": built, "levels_skipped": skipped})


def _choose_degree(N: int, eta: float, candidate_primes: int, max_lps_vertices: int) -> int:
    """p + 1 for the candidate p whose realized spectral degree is closest to N^(1/(2 loglog N))."""
    target = N ** (1 / (2 * clamped_loglog(N)))
    best = None
    for p in _first_primes(candidate_primes):
        if p + 1 > N:
            break
        try:
            if lps_vertex_count(*balanced_prime_pq(p + 1, N)) > max_lps_vertices:
                continue
            realized = expected_spectral_degree(N, p + 1)
        except (ParameterInfeasibleError, DomainError):
            continue
        if math.floor(eta * realized / 4) < 1:
            continue
        key = (abs(realized - target), p)
        if best is None or key < best[0]:
            best = (key, p)
    if best is None:
        raise ParameterInfeasibleError(
            f"no spectral degree in the window for N={N}, eta={eta}", guard="floor(eta d/4) >= 1"
        )
    return best[1] + 1


def _first_primes(count: int) -> List[int]:
    gen = primes_one_mod_four()
    return [next(gen) for _ in range(count)]


def _best_exact_certificate(inner: SignCheckMatrix, budget: int) -> Optional[SpreadCertificate]:
    """Exact (0, t, eps(t)) maximizing sqrt(t) eps(t)^2 over enumerable t."""
    B = kernel_basis(inner)
    best, best_score = None, 0.0
    t = 1
    while t <= B.N - B.dim and comb(B.N, t, exact=True) <= budget:
        eps = exact_spread(B, t, budget=budget)
        if eps <= 0:
            break
        score = math.sqrt(t) * eps * eps
        if score > best_score:
            best_score = score
            best = SpreadCertificate(t=0.0, T=float(t), eps=min(eps, 1.0), provenance=Provenance.EXACT_ORACLE,
                                     trail=(f"exact-spread(t={t},d={B.N})",))
        t += 1
    return best


def assemble_theorem2(
    N: int,
    eta: float,
    seed: int,
    degree: Optional[int] = None,
    beta0: float = 0.05,
    min_N: int = 256,
    candidate_primes: int = 4,
    enum_budget: int = 1_000_000,
    max_lps_vertices: int = 20000,
) -> Assembly:
    """X(G, ker A) with one spectral graph G and A a k x d sign matrix from the seeded stream, k = floor(eta d/4)."""
    if seed is None or seed < 0:
        raise DomainError(f"seeded assembly needs a non-negative seed, got {seed}")
    if N < min_N:
        raise ParameterInfeasibleError(f"N={N} below the configured minimum {min_N}", guard="N >= min_N")
    if not 0 < eta <= 1:
        raise DomainError(f"eta must lie in (0, 1], got {eta}")
    target_degree = degree if degree is not None else _choose_degree(N, eta, candidate_primes, max_lps_vertices)
    G, profile = build_spectral_expander(N, target_degree, max_vertices=max_lps_vertices)
    k = math.floor(eta * G.d / 4)
    if k < 1:
        raise ParameterInfeasibleError(
            f"infeasible d window: realized degree {G.d} gives k = floor(eta d/4) = 0", guard="floor(eta d/4) >= 1"
        )
    stream = SignBitStream(seed)
    signs = stream.signs(k, G.d)
    bits = stream.consumed
    inner_check = SignCheckMatrix.from_dense(signs, label=f"seeded k={k} d={G.d} seed={seed} stream={stream.name}")
    check = tanner_check_matrix(G, inner_check,
                                label=f"level 0: graph=({G.N},{G.n},{G.D},{G.d}) inner=seeded k={k} seed={seed}")
    if check.rows > eta * N:
        raise VerificationError(f"seeded assembly uses {check.rows} rows > eta N = {eta * N:g}")

    inner_cert = _best_exact_certificate(inner_check, enum_budget)
    if inner_cert is None:
        certificate = VACUOUS
    else:
        certificate = iterated_pushdown(profile, inner_cert, G.D, steps=math.ceil(1 / beta0))
        if not certificate.useful:
            certificate = VACUOUS
    target = N ** (1 / (2 * clamped_loglog(N)))
    guards = (
        TheoryGuard(name="random bits <= d^2", held=bits <= G.d * G.d, detail=f"bits={bits}, d={G.d}"),
        TheoryGuard(name="d near N^(1/(2 loglog N))", held=G.d <= max(2 * target, 5) and G.d >= target / 2,
                    detail=f"d={G.d}, target={target:.3g}"),
    )
    logger.info(f"Seeded assembly N={N}, eta={eta:g}, seed={seed}: d={G.d}, k={k}, rows={check.rows}, bits={bits}")
    return Assembly(
        check=check, certificate=certificate, mode=AssemblyMode.SEEDED, random_bit_count=bits, guards=guards,
        details={"k": k, "d": G.d, "n": G.n, "p": profile.params["p"], "q": profile.params["q"], "seed": seed},
    )
