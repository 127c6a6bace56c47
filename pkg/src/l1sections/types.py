# src/l1sections/types.py
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .constants import AssemblyMode, BentFamilyKind, Provenance


class SpreadCertificate(BaseModel):
    """(t, T, eps)-spread claim. A (t, eps)-spread claim is stored as (0, t, eps)."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(..., ge=0, description="Lower subset size")
    T: float = Field(..., ge=0, description="Upper subset size")
    eps: float = Field(..., gt=0, le=1, description="Retained mass fraction")
    provenance: Provenance = Field(..., description="How the claim was obtained")
    trail: Tuple[str, ...] = Field(default=(), description="Applied rules, oldest first")
    notes: Tuple[str, ...] = Field(default=(), description="Flags such as degenerate")

    @model_validator(mode="after")
    def _check_order(self) -> "SpreadCertificate":
        if self.t > self.T:
            raise ValueError(f"t={self.t} exceeds T={self.T}")
        return self

    @property
    def anchored(self) -> bool:
        # (t, eps) <=> (0, t, eps) <=> (1/2, t, eps)
        return self.t <= 0.5

    @property
    def useful(self) -> bool:
        return self.T > self.t and "not-useful" not in self.notes


class DistortionBound(BaseModel):
    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=1)
    lower: Optional[float] = Field(None, description="Best witnessed sqrt(N)|x|_2/|x|_1")
    witness: Optional[Tuple[float, ...]] = Field(None, repr=False)
    upper: Optional[float] = Field(None, description="Certified upper bound")
    trail: Tuple[str, ...] = Field(default=())

    @model_validator(mode="after")
    def _check_sandwich(self) -> "DistortionBound":
        if self.lower is not None and self.lower < 1 - 1e-9:
            raise ValueError(f"distortion lower bound {self.lower} below 1")
        if self.lower is not None and self.upper is not None:
            if self.lower > self.upper * (1 + 1e-9):
                raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")
        return self

    @property
    def witness_sparsity(self) -> Optional[int]:
        if self.witness is None:
            return None
        peak = max((abs(v) for v in self.witness), default=0.0)
        return sum(1 for v in self.witness if abs(v) > 1e-9 * peak)


class RecoveryReport(BaseModel):
    support_size: int = Field(..., ge=0)
    success: bool
    relative_error: float = Field(..., ge=0)
    sigma_k: float = Field(..., ge=0, description="Best s-term l1 approximation error")
    stability_ratio: Optional[float] = Field(None, description="|x-v|_2 sqrt(s)/sigma_s")
    residual: float = Field(..., ge=0)
    objective: float = Field(..., ge=0)
    seed: int

    @model_validator(mode="after")
    def _check_success(self) -> "RecoveryReport":
        if self.success and self.relative_error > 1e-6:
            raise ValueError("success flagged with relative error above 1e-6")
        return self


class CurvePoint(BaseModel):
    s: int = Field(..., ge=0)
    trials: int = Field(..., ge=1)
    successes: int = Field(..., ge=0)

    @property
    def rate(self) -> float:
        return self.successes / self.trials


class TheoryGuard(BaseModel):
    name: str
    held: bool
    detail: str = ""


class AssemblyLevel(BaseModel):
    index: int
    t: float = Field(..., description="Schedule point t_i")
    status: str = Field("pending", description="built, trivial, covered or skipped")
    graph: Dict[str, int] = Field(default_factory=dict, description="N, n, D, d of the level graph")
    inner: Dict[str, Any] = Field(default_factory=dict, description="Inner space parameters")
    rows: int = 0
    kept: bool = False
    certificate: Optional[SpreadCertificate] = None


class AssemblySchedule(BaseModel):
    N: int
    eta: float
    eta_tilde: float
    beta0: float
    epsilon: float
    delta: float
    points: List[float] = Field(default_factory=list, description="t_0 < t_1 < ... < t_r")
    levels: List[AssemblyLevel] = Field(default_factory=list)
    guards: List[TheoryGuard] = Field(default_factory=list)

    @property
    def r(self) -> int:
        return max(len(self.points) - 1, 0)

    @property
    def total_rows(self) -> int:
        return sum(level.rows for level in self.levels if level.kept)


class RunConfig(BaseModel):
    command: str
    N: Optional[int] = Field(None, ge=1)
    eta: float = Field(0.5, gt=0, le=1)
    mode: AssemblyMode = AssemblyMode.EXPLICIT
    seed: Optional[int] = Field(None, ge=0)
    beta0: float = Field(0.05, gt=0, lt=0.5)
    epsilon_schedule: float = Field(1 / 16, gt=0, le=1)
    delta: float = Field(0.25, gt=0, le=1)
    xi0_assumed: float = Field(0.0, ge=0, lt=1)
    bent_family: BentFamilyKind = BentFamilyKind.KERDOCK
    degree: Optional[int] = Field(None, ge=5, description="Seeded-mode spectral degree override")
    min_N: int = Field(256, ge=8)
    out: Optional[str] = None
    max_analysis_n: int = Field(4096, ge=1)
    enum_budget: int = Field(1_000_000, ge=1)
    samples: int = Field(10_000, ge=1)
    workers: int = Field(4, ge=1)

    @model_validator(mode="after")
    def _check_mode(self) -> "RunConfig":
        if self.command == "construct":
            if self.N is None:
                raise ValueError("construct requires N")
            if self.N < self.min_N:
                raise ValueError(f"N={self.N} below configured minimum {self.min_N}")
            if self.mode is AssemblyMode.EXPLICIT and self.seed is not None:
                raise ValueError("explicit mode is deterministic and consumes no seed")
        return self


# Configuration dictionary structure (simplified)
Config = Dict[str, Any]
IndexList = List[int]
