# src/l1sections/algebra/boolean.py
import logging
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """Truth table of f: {0,1}^a -> {0,1}; entry x is f at the bit pattern x."""

    arity: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError(f"arity must be positive, got {self.arity}")
        table = np.asarray(self.table, dtype=np.uint8)
        if table.shape != (1 << self.arity,):
            raise DomainError(f"truth table of arity {self.arity} needs {1 << self.arity} entries, got {table.shape}")
        if np.any(table > 1):
            raise DomainError("truth table values must be 0 or 1")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def __xor__(self, other: "BooleanFunction") -> "BooleanFunction":
        if other.arity != self.arity:
            raise DomainError(f"arity mismatch: {self.arity} vs {other.arity}")
        return BooleanFunction(self.arity, self.table ^ other.table)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BooleanFunction) and other.arity == self.arity and np.array_equal(other.table, self.table)

    def __hash__(self) -> int:
        return hash((self.arity, self.table.tobytes()))

    def to_hex(self) -> str:
        """Table bits packed little-endian, as hex."""
        return np.packbits(self.table, bitorder="little").tobytes().hex()

    @classmethod
    def from_hex(cls, arity: int, text: str) -> "BooleanFunction":
        packed = np.frombuffer(bytes.fromhex(text), dtype=np.uint8)
        bits = np.unpackbits(packed, bitorder="little")[: 1 << arity]
        return cls(arity, bits)

    def signs(self) -> np.ndarray:
        """(-1)^f(x) as int64."""
        return 1 - 2 * self.table.astype(np.int64)


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    """W(u) = sum_x (-1)^(f(x) + u.x), the Fourier coefficients times 2^a."""

    arity: int
    coefficients: np.ndarray = field(repr=False)

    def parseval_holds(self) -> bool:
        return int(np.sum(self.coefficients * self.coefficients)) == 1 << (2 * self.arity)


def dot_parity(u: np.ndarray | int, x: np.ndarray | int) -> np.ndarray:
    """Parity of popcount(u & x)."""
    v = np.bitwise_and(u, x).astype(np.uint64)
    parity = np.zeros(np.shape(v), dtype=np.uint64)
    while np.any(v):
        parity ^= v & np.uint64(1)
        v = v >> np.uint64(1)
    return parity.astype(np.uint8)


def linear_function(arity: int, u: int) -> BooleanFunction:
    """L_u(x) = u.x."""
    xs = np.arange(1 << arity)
    return BooleanFunction(arity, dot_parity(u, xs))


def fast_walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """
    Unnormalised Walsh-Hadamard butterfly along the last axis (length 2^a).
    Integer input stays integer, so results are exact.
    """
    a = np.array(values, dtype=np.int64, copy=True)
    size = a.shape[-1]
    if size & (size - 1):
        raise DomainError(f"transform length must be a power of two, got {size}")
    lead = a.shape[:-1]
    h = 1
    while h < size:
        view = a.reshape(*lead, size // (2 * h), 2, h)
        lo = view[..., 0, :].copy()
        hi = view[..., 1, :]
        view[..., 0, :] = lo + hi
        view[..., 1, :] = lo - hi
        h *= 2
    return a


def walsh_transform(f: BooleanFunction) -> WalshSpectrum:
    return WalshSpectrum(f.arity, fast_walsh_hadamard(f.signs()))


def is_bent(f: BooleanFunction) -> bool:
    if f.arity % 2:
        raise DomainError("bentness undefined for odd arity")
    target = 1 << (f.arity // 2)
    return bool(np.all(np.abs(walsh_transform(f).coefficients) == target))


def bent_mask(tables: np.ndarray) -> np.ndarray:
    """is_bent for a stack of truth tables (rows), one butterfly pass for all."""
    tables = np.atleast_2d(tables)
    size = tables.shape[-1]
    arity = size.bit_length() - 1
    if arity % 2:
        raise DomainError("bentness undefined for odd arity")
    spectra = fast_walsh_hadamard(1 - 2 * tables.astype(np.int64))
    return np.all(np.abs(spectra) == (1 << (arity // 2)), axis=-1)
