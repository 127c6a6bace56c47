# src/l1sections/main.py
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError
from scipy.special import comb

from .analysis.certificates import spread_to_distortion
from .analysis.distortion import distortion_lower_bound, distortion_sandwich
from .analysis.kernel import KernelBasis, kernel_basis
from .analysis.spread import exact_certificate, exact_spread, sampled_spread
from .constants import BRUTEFORCE_MAX_LEFT, AssemblyMode, Provenance
from .exceptions import ConfigurationError, DomainError, NumericalGuardError, VerificationError
from .expanders.graphs import BipartiteGraph, cycle_graph
from .expanders.lps import build_lps, spectral_report
from .expanders.profile import ProfileBound, profile_table
from .expanders.spectral import build_spectral_expander, edge_vertex_incidence
from .expanders.sum_product import build_sum_product
from .sensing.trials import RecoveryCurve, recovery_curve
from .storage.formats import (
    format_check,
    format_curve,
    format_graph,
    format_report,
    parse_check,
    read_report,
    read_text,
    write_text,
)
from .tanner.assembly import Assembly, assemble_theorem1, assemble_theorem2
from .types import Config, RunConfig, SpreadCertificate
from .utils.hash import matrix_digest

logger = logging.getLogger(__name__)

GRAPH_FAMILIES = ("sumproduct", "spectral", "lps", "cycle")


@dataclass(frozen=True)
class ConstructionOutput:
    assembly: Assembly
    check_path: Path
    report_path: Path
    digest: str


class SubspaceWorkbench:
    """
    Orchestrates constructions, analyses, graph exports and sensing
    experiments, and writes their text artifacts. Nothing written depends on
    the clock, the environment or the number of workers.
    """

    def __init__(self, config: Config):
        self.config: Config = config
        self.assembly_config = config.get("assembly", {})
        self.seeded_config = config.get("seeded", {})
        self.expander_config = config.get("expanders", {})
        self.analysis_config = config.get("analysis", {})
        self.sensing_config = config.get("sensing", {})
        self.boost_config = config.get("boost", {})
        self.output_dir = Path(config.get("output", {}).get("directory", "output"))
        logger.info("SubspaceWorkbench initialized.")

    def _default_path(self, name: str) -> Path:
        return self.output_dir / name

    # construct

    def build_assembly(self, run: RunConfig) -> Assembly:
        max_vertices = self.expander_config.get("max_lps_vertices", 20000)
        if run.mode is AssemblyMode.SEEDED:
            if run.seed is None:
                raise ConfigurationError("seeded mode requires a seed")
            return assemble_theorem2(
                run.N, run.eta, run.seed,
                degree=run.degree,
                beta0=run.beta0,
                min_N=run.min_N,
                candidate_primes=self.seeded_config.get("candidate_primes", 4),
                enum_budget=run.enum_budget,
                max_lps_vertices=max_vertices,
            )
        return assemble_theorem1(
            run.N, run.eta,
            beta0=run.beta0,
            epsilon=run.epsilon_schedule,
            delta=run.delta,
            min_N=run.min_N,
            kind=run.bent_family,
            xi0=run.xi0_assumed,
            min_eta=self.boost_config.get("min_eta", 1 / 64),
            degree_slack=self.assembly_config.get("degree_slack", 4),
            max_inner_k=self.assembly_config.get("max_inner_k", 256),
            max_lps_vertices=max_vertices,
            max_levels=self.assembly_config.get("max_levels", 1000),
            strict=self.assembly_config.get("strict_levels", False),
        )

    def construction_report(self, run: RunConfig, assembly: Assembly, digest: str) -> Dict[str, Any]:
        cert = assembly.certificate
        upper = spread_to_distortion(cert, run.N).upper if cert.T > 0 and cert.anchored else None
        report: Dict[str, Any] = {
            "N": run.N,
            "t": cert.t,
            "T": cert.T,
            "eps": cert.eps,
            "provenance": cert.provenance,
            "delta_upper": upper,
            "trail": cert.trail,
            "mode": assembly.mode,
            "eta": run.eta,
            "rows": assembly.rows,
            "row_budget": math.floor(run.eta * run.N),
            "random_bit_count": assembly.random_bit_count,
            "seed": run.seed,
            "notes": cert.notes or None,
            "digest": digest,
        }
        if assembly.schedule is not None:
            report["r"] = assembly.schedule.r
            report["eta_tilde"] = assembly.schedule.eta_tilde
            report["schedule"] = tuple(assembly.schedule.points)
            for level in assembly.schedule.levels:
                graph = ",".join(f"{k}={v}" for k, v in level.graph.items()) or "none"
                inner = ",".join(f"{k}={v}" for k, v in level.inner.items()) or "none"
                report[f"level.{level.index}"] = (f"t={level.t:g}", f"status={level.status}", f"rows={level.rows}",
                                                     f"graph={graph}", f"inner={inner}")
        for key, value in assembly.details.items():
            report[f"detail.{key}"] = value
        for i, guard in enumerate(assembly.guards):
            report[f"guard.{i}"] = (guard.name, "held" if guard.held else "failed", guard.detail or "-")
        return report

    def construct(self, run: RunConfig) -> ConstructionOutput:
        assembly = self.build_assembly(run)
        check_text = format_check(assembly.check)
        digest = matrix_digest(check_text)
        stem = Path(run.out) if run.out else self._default_path(f"{assembly.mode.value}_N{run.N}")
        check_path = write_text(stem.with_suffix(".check"), check_text)
        report_path = write_text(stem.with_suffix(".report"),
                                 format_report(self.construction_report(run, assembly, digest)))
        failed = [g.name for g in assembly.guards if not g.held]
        if failed:
            logger.warning(f"{len(failed)} theory guards did not hold at N={run.N}: {failed}")
        logger.info(f"Wrote {check_path} ({assembly.rows} rows, digest {digest}) and {report_path}")
        return ConstructionOutput(assembly=assembly, check_path=check_path, report_path=report_path, digest=digest)

    # analyze

    @staticmethod
    def companion_certificate(matrix_path: Path) -> Optional[SpreadCertificate]:
        """Certificate recorded in the .report written next to a constructed matrix, if any."""
        report_path = Path(matrix_path).with_suffix(".report")
        if not report_path.exists():
            return None
        values = read_report(report_path)
        if any(values.get(key, "none") == "none" for key in ("t", "T", "eps", "provenance")):
            return None
        trail = tuple(values["trail"].split(" ; ")) if values.get("trail", "none") != "none" else ()
        notes = tuple(values["notes"].split(" ; ")) if values.get("notes", "none") != "none" else ()
        try:
            return SpreadCertificate(
                t=float(values["t"]), T=float(values["T"]), eps=float(values["eps"]),
                provenance=Provenance.from_string(values["provenance"]), trail=trail, notes=notes,
            )
        except (ValueError, ValidationError) as e:
            logger.warning(f"Ignoring unreadable certificate in {report_path}: {e}")
            return None

    def _spread_values(self, B: KernelBasis, sizes: Sequence[int], run: RunConfig) -> Dict[str, Any]:
        values: Dict[str, Any] = {}
        seed = self.analysis_config.get("seed", 0)
        for t in sizes:
            if t < 1 or t > B.N:
                continue
            if comb(B.N, t, exact=True) <= run.enum_budget:
                values[f"eps_exact_t{t}"] = exact_spread(B, t, budget=run.enum_budget, workers=run.workers)
            else:
                values[f"eps_sampled_t{t}"] = sampled_spread(
                    B, t, run.samples, seed=seed, workers=run.workers,
                    block_size=self.analysis_config.get("block_size", 512),
                )
        return values

    def _oracle_certificate(self, B: KernelBasis, sizes: Sequence[int], run: RunConfig) -> Optional[SpreadCertificate]:
        """Exact (0, t, eps) at the largest enumerable t with positive spread."""
        best = None
        for t in sorted(set(sizes)):
            if t < 1 or comb(B.N, t, exact=True) > run.enum_budget:
                continue
            cert = exact_certificate(B, t, budget=run.enum_budget, workers=run.workers)
            if cert is not None:
                best = cert
        return best

    def analyze(self, matrix_path: str, run: RunConfig, report_path: Optional[str] = None) -> Dict[str, Any]:
        matrix_path = Path(matrix_path)
        check_text = read_text(matrix_path)
        A = parse_check(check_text)
        certificate = self.companion_certificate(matrix_path)
        report: Dict[str, Any] = {"N": A.cols}

        if A.cols > run.max_analysis_n:
            if certificate is None:
                raise NumericalGuardError(
                    f"N={A.cols} exceeds the analysis guard {run.max_analysis_n} and no certificate is recorded"
                )
            logger.warning(f"N={A.cols} above the analysis guard; reporting the recorded certificate only")
            report.update(self._certificate_entries(certificate, A.cols, lower=None))
            report["analysis_mode"] = "certificate-only"
        else:
            B = kernel_basis(A, max_n=run.max_analysis_n)
            sizes = list(self.analysis_config.get("spread_sizes", [1, 2]))
            if certificate is not None and certificate.T >= 1:
                sizes.append(math.floor(certificate.T))
            if certificate is None:
                certificate = self._oracle_certificate(B, sizes, run)
            lower = distortion_lower_bound(
                B,
                budget=run.samples,
                seed=self.analysis_config.get("seed", 0),
                refinements=self.analysis_config.get("distortion_refinements", 20),
            )
            report["dim"] = B.dim
            report.update(self._certificate_entries(certificate, A.cols, lower))
            spread = self._spread_values(B, sorted(set(sizes)), run)
            report.update(spread)
            sampled = any(key.startswith("eps_sampled") for key in spread)
            report["analysis_mode"] = "sampled" if sampled else "exact"
        report["rows"] = A.rows
        report["digest"] = matrix_digest(check_text)
        target = Path(report_path) if report_path else matrix_path.with_suffix(".analysis")
        write_text(target, format_report(report))
        logger.info(f"Analysis of {matrix_path} written to {target}")
        return report

    def _certificate_entries(self, cert: Optional[SpreadCertificate], N: int, lower) -> Dict[str, Any]:
        entries: Dict[str, Any] = {key: None for key in ("t", "T", "eps", "provenance")}
        upper = None
        if cert is not None:
            entries.update(t=cert.t, T=cert.T, eps=cert.eps, provenance=cert.provenance)
            if cert.T > 0 and cert.anchored:
                upper = spread_to_distortion(cert, N)
        trail: Tuple[str, ...] = cert.trail if cert is not None else ()
        if lower is not None:
            try:
                sandwich = distortion_sandwich(lower, upper)
            except ValidationError as e:
                raise VerificationError(f"witnessed distortion exceeds the certified upper bound: {e}") from e
            entries["delta_lower"] = sandwich.lower
            entries["delta_upper"] = sandwich.upper
            entries["witness_sparsity"] = sandwich.witness_sparsity
            trail = trail + lower.trail
        else:
            entries["delta_lower"] = None
            entries["delta_upper"] = upper.upper if upper is not None else None
            entries["witness_sparsity"] = None
        entries["trail"] = trail or None
        return entries

    # graph

    def build_graph(self, family: str, N: Optional[int] = None, p: Optional[int] = None,
                    q: Optional[int] = None, d: Optional[int] = None,
                    xi0: float = 0.0) -> Tuple[BipartiteGraph, Optional[ProfileBound], Dict[str, Any]]:
        family = family.strip().lower()
        extras: Dict[str, Any] = {"family": family}
        max_vertices = self.expander_config.get("max_lps_vertices", 20000)
        if family == "sumproduct":
            self._require(N, "N", family)
            G, profile = build_sum_product(N, xi0=xi0)
        elif family == "spectral":
            self._require(N, "N", family)
            self._require(d, "d", family)
            G, profile = build_spectral_expander(
                N, d, verify_spectrum=self.expander_config.get("verify_spectrum", False), max_vertices=max_vertices,
            )
            extras.update(p=profile.params["p"], q=profile.params["q"])
        elif family == "lps":
            self._require(p, "p", family)
            self._require(q, "q", family)
            Y = build_lps(p, q, max_vertices=max_vertices)
            spectral = spectral_report(
                p, q, Y=Y,
                samples=self.expander_config.get("alon_chung_samples", 0),
                seed=self.analysis_config.get("seed", 0),
                workers=self.config.get("concurrency", {}).get("workers", 1),
            )
            G, profile = edge_vertex_incidence(Y), None
            extras.update(p=p, q=q, vertices=spectral.vertices, lambda2=spectral.lambda2,
                          ramanujan_bound=spectral.ramanujan_bound, ramanujan=spectral.ramanujan,
                          alon_chung_samples=spectral.alon_chung_samples,
                          alon_chung_passed=spectral.alon_chung_passed)
        elif family == "cycle":
            self._require(N, "N", family)
            G, profile = edge_vertex_incidence(cycle_graph(N)), None
        else:
            raise DomainError(f"unknown graph family '{family}', expected one of {GRAPH_FAMILIES}")
        return G, profile, extras

    @staticmethod
    def _require(value, name: str, family: str) -> None:
        if value is None:
            raise ConfigurationError(f"graph family '{family}' needs --{name}")

    def graph(self, family: str, out: Optional[str] = None, **params) -> Dict[str, Any]:
        G, profile, report = self.build_graph(family, **params)
        report.update(header="GRAPH " + " ".join(str(v) for v in G.header), max_left_degree=G.max_left_degree)
        if profile is not None:
            report["profile"] = profile.describe()
            report["profile_provenance"] = profile.provenance
        if G.N <= BRUTEFORCE_MAX_LEFT:
            table = profile_table(G)
            for m in range(1, G.N + 1):
                report[f"profile_exact_m{m}"] = int(table[m])
                if profile is not None:
                    report[f"profile_bound_m{m}"] = profile.evaluate(m)
        stem = Path(out) if out else self._default_path(f"{family}_{'_'.join(str(v) for v in G.header)}")
        graph_path = write_text(stem.with_suffix(".graph"), format_graph(G))
        write_text(stem.with_suffix(".report"), format_report(report))
        logger.info(f"Graph {G.header} written to {graph_path}")
        return report

    # csdemo

    def csdemo(self, matrix_path: str, s_grid: Sequence[int], trials: int, seed: int,
               noise_level: float = 0.0, out: Optional[str] = None, workers: int = 1) -> RecoveryCurve:
        A = parse_check(read_text(matrix_path))
        curve = recovery_curve(
            A, s_grid, trials, seed=seed, noise_level=noise_level, workers=workers,
            tol_feas=self.sensing_config.get("tol_feas", 1e-8),
            tol_opt=self.sensing_config.get("tol_opt", 1e-7),
            methods=tuple(self.sensing_config.get("solver_methods", ("highs-ds", "highs-ipm", "highs"))),
        )
        target = Path(out) if out else Path(matrix_path).with_suffix(".curve")
        write_text(target, format_curve(curve.points))
        write_text(target.with_suffix(".curve-report"), format_report({
            "N": A.cols,
            "rows": A.rows,
            "seed": seed,
            "trials": trials,
            "noise_level": noise_level,
            "smoothed": tuple(curve.smoothed) or None,
            "largest_reliable_s": curve.largest_reliable(),
        }))
        logger.info(f"Recovery curve written to {target}")
        return curve


def parse_s_grid(text: str) -> List[int]:
    """'0,1,2' or '1-4' or a mix of both."""
    values: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            low, _, high = part.partition("-")
            values.extend(range(int(low), int(high) + 1))
        else:
            values.append(int(part))
    if any(v < 0 for v in values):
        raise DomainError(f"support sizes must be non-negative: {text}")
    return values
