# src/l1sections/constants.py
from enum import Enum

# Irreducible polynomial over GF(2) for each extension degree, bit i = coefficient of x^i.
IRREDUCIBLE_POLYNOMIALS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x1000087,
}
MAX_FIELD_DEGREE = 24

# Numerical tolerances
SVD_TOLERANCE = 1e-9
RANK_TOLERANCE = 1e-7
NORM_TOLERANCE = 1e-9
EIGEN_TOLERANCE = 1e-6
KERNEL_RESIDUAL_TOLERANCE = 1e-8

POWER_ITERATIONS = 200
DENSE_EIGEN_LIMIT = 4000
LANCZOS_SEED = 0
LANCZOS_MAX_ITER = 500

# Exhaustive expansion-profile guards
BRUTEFORCE_MAX_LEFT = 24
BRUTEFORCE_MAX_RIGHT = 20

# Exit codes
EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_INFEASIBLE = 2
EXIT_PARSE_ERROR = 3
EXIT_GUARD_EXCEEDED = 4
EXIT_INTERRUPTED = 130

REPORT_KEYS = (
    "N",
    "dim",
    "t",
    "T",
    "eps",
    "provenance",
    "delta_lower",
    "delta_upper",
    "witness_sparsity",
    "trail",
)


class Provenance(Enum):
    SAMPLED = "sampled"
    ASSUMED_CONSTANT = "assumed-constant"
    EXACT_ORACLE = "exact-oracle"
    PROVED_ARITHMETIC = "proved-arithmetic"

    @property
    def strength(self) -> int:
        return _PROVENANCE_ORDER.index(self)

    @staticmethod
    def weakest(*items: "Provenance") -> "Provenance":
        return min(items, key=lambda p: p.strength)

    @staticmethod
    def from_string(s: str) -> "Provenance":
        value = s.strip().lower()
        for member in Provenance:
            if member.value == value:
                return member
        raise ValueError(f"Unknown provenance: {s}")


_PROVENANCE_ORDER = [
    Provenance.SAMPLED,
    Provenance.ASSUMED_CONSTANT,
    Provenance.EXACT_ORACLE,
    Provenance.PROVED_ARITHMETIC,
]


class ProfileKind(Enum):
    SPECTRAL = "spectral"
    SUMPRODUCT = "sumproduct"
    TRIVIAL = "trivial"
    BRUTEFORCE = "bruteforce"


class BentFamilyKind(Enum):
    KERDOCK = "kerdock"  # k/2 - 1 functions
    QUADRATIC_TRACE = "quadratic-trace"  # sqrt(k) - 1 functions

    @staticmethod
    def from_string(s: str) -> "BentFamilyKind":
        value = s.strip().lower()
        for member in BentFamilyKind:
            if member.value == value:
                return member
        raise ValueError(f"Unknown bent family: {s}")


class AssemblyMode(Enum):
    EXPLICIT = "explicit"
    SEEDED = "seeded"

    @staticmethod
    def from_string(s: str) -> "AssemblyMode":
        aliases = {
            "explicit": AssemblyMode.EXPLICIT,
            "thm1-explicit": AssemblyMode.EXPLICIT,
            "seeded": AssemblyMode.SEEDED,
            "thm2-seeded": AssemblyMode.SEEDED,
        }
        try:
            return aliases[s.strip().lower()]
        except KeyError:
            raise ValueError(f"Unknown assembly mode: {s}") from None
