# src/l1sections/algebra/gf2m.py
"""Binary extension fields GF(2^m) on integer bit patterns.

Scalars are multiplied schoolbook-style (carry-less multiply, then reduce).
Whole-field work (trace tables, multiplying every element by a constant) goes
through log/antilog tables built once per field.
"""
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from ..constants import IRREDUCIBLE_POLYNOMIALS, MAX_FIELD_DEGREE
from ..exceptions import DomainError, FieldMismatchError, VerificationError

logger = logging.getLogger(__name__)


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mod(a: int, b: int) -> int:
    """Remainder of a modulo b, both polynomials over GF(2) as bit patterns."""
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit patterns."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def is_irreducible(poly: int) -> bool:
    """Exhaustive divisor check; fine for degree <= 24."""
    m = poly_degree(poly)
    if m < 1:
        return False
    if m == 1:
        return True
    if not poly & 1:
        return False
    for divisor_degree in range(1, m // 2 + 1):
        for divisor in range(1 << divisor_degree, 1 << (divisor_degree + 1)):
            if poly_mod(poly, divisor) == 0:
                return False
    return True


class GF2m:
    """Field context: degree m and an irreducible modulus of degree m."""

    def __init__(self, m: int, modulus: int | None = None):
        if not 1 <= m <= MAX_FIELD_DEGREE:
            raise DomainError(f"extension degree must lie in [1, {MAX_FIELD_DEGREE}], got {m}")
        modulus = IRREDUCIBLE_POLYNOMIALS[m] if modulus is None else modulus
        if poly_degree(modulus) != m:
            raise DomainError(f"modulus {modulus:#x} does not have degree {m}")
        if not is_irreducible(modulus):
            raise DomainError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.m = m
        self.modulus = modulus
        self.order = 1 << m

    def __repr__(self) -> str:
        return f"GF2m(m={self.m}, modulus={self.modulus:#x})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF2m) and (self.m, self.modulus) == (other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.m, self.modulus))

    def element(self, bits: int) -> "GF2mElement":
        return GF2mElement(bits, self)

    def mul(self, x: int, y: int) -> int:
        return poly_mod(clmul(x, y), self.modulus)

    def power(self, x: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def inverse(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^m)")
        return self.power(x, self.order - 2)

    def trace(self, x: int) -> int:
        acc, conj = 0, x
        for _ in range(self.m):
            acc ^= conj
            conj = self.mul(conj, conj)
        if acc not in (0, 1):
            raise VerificationError(f"trace of {x:#x} left the prime field")
        return acc

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log) tables for a primitive element; exp has length 2(2^m - 1)."""
        group = self.order - 1
        for g in range(2, self.order) if self.m > 1 else [1]:
            exp = np.empty(2 * group, dtype=np.int64)
            log = np.full(self.order, -1, dtype=np.int64)
            x = 1
            for i in range(group):
                if log[x] != -1:
                    break
                exp[i] = x
                log[x] = i
                x = self.mul(x, g)
            else:
                exp[group:] = exp[:group]
                logger.debug(f"{self!r}: primitive element {g:#x}")
                return exp, log
        raise VerificationError(f"no primitive element found in {self!r}")

    def mul_array(self, x: int | np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Elementwise product, vectorised over numpy integer arrays."""
        exp, log = self._tables
        xs = np.broadcast_to(np.asarray(x, dtype=np.int64), np.shape(ys))
        ys = np.asarray(ys, dtype=np.int64)
        nonzero = (xs != 0) & (ys != 0)
        out = np.zeros(ys.shape, dtype=np.int64)
        out[nonzero] = exp[log[xs[nonzero]] + log[ys[nonzero]]]
        return out

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Tr(y) for every y, as uint8."""
        ys = self.elements()
        acc, conj = ys.copy(), ys
        for _ in range(self.m - 1):
            conj = self.mul_array(conj, conj)
            acc ^= conj
        if np.any(acc > 1):
            raise VerificationError(f"trace table of {self!r} left the prime field")
        return acc.astype(np.uint8)

    @cached_property
    def second_symmetric_table(self) -> np.ndarray:
        """e2(y) = sum over i<j of y^(2^i) y^(2^j) for every y; lies in GF(2)."""
        ys = self.elements()
        prefix = ys.copy()
        conj = ys
        e2 = np.zeros_like(ys)
        for _ in range(self.m - 1):
            conj = self.mul_array(conj, conj)
            e2 ^= self.mul_array(conj, prefix)
            prefix = prefix ^ conj
        if np.any(e2 > 1):
            raise VerificationError(f"second symmetric function of {self!r} left the prime field")
        return e2.astype(np.uint8)


@lru_cache(maxsize=None)
def get_field(m: int) -> GF2m:
    """Shared field context for the tabulated modulus of degree m."""
    return GF2m(m)


@dataclass(frozen=True)
class GF2mElement:
    bits: int
    field: GF2m

    def __post_init__(self):
        if not 0 <= self.bits < self.field.order:
            raise DomainError(f"{self.bits} is not an element of {self.field!r}")

    def __add__(self, other: "GF2mElement") -> "GF2mElement":
        _check_same_field(self, other)
        return GF2mElement(self.bits ^ other.bits, self.field)

    def __mul__(self, other: "GF2mElement") -> "GF2mElement":
        return gf2m_mul(self, other)


def _check_same_field(x: GF2mElement, y: GF2mElement) -> None:
    if x.field != y.field:
        raise FieldMismatchError(f"operands from different fields: {x.field!r} and {y.field!r}")


def gf2m_mul(x: GF2mElement, y: GF2mElement) -> GF2mElement:
    _check_same_field(x, y)
    return GF2mElement(x.field.mul(x.bits, y.bits), x.field)
