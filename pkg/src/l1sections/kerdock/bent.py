# src/l1sections/kerdock/bent.py
"""Families of quadratic bent functions whose pairwise sums are bent.

Two families are shipped:

* ``kerdock`` (k/2 - 1 functions). With m = log2(k) - 1 odd and z = (x, e),
  x in GF(2^m), e in GF(2), f_l(x, e) = e2(l x) + e Tr(l x) for l != 0, where
  e2 is the second elementary symmetric function of the conjugates.
* ``quadratic-trace`` (sqrt(k) - 1 functions). With h = log2(k)/2 and
  z = (x, y), f_l(x, y) = Tr(l x y) over GF(2^h).

Every member and every pairwise sum is checked with the Walsh transform
before a family is returned.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..algebra.boolean import BooleanFunction, bent_mask
from ..algebra.gf2m import get_field
from ..constants import BentFamilyKind
from ..exceptions import DomainError, ParameterInfeasibleError, VerificationError
from ..utils.validation import is_power_of_four

logger = logging.getLogger(__name__)

# Pairwise-sum checks are batched so the stacked tables stay small.
_PAIR_BATCH_ENTRIES = 1 << 22


@dataclass(frozen=True)
class BentFamily:
    k: int
    kind: BentFamilyKind
    functions: Tuple[BooleanFunction, ...]
    capacity: int

    @property
    def arity(self) -> int:
        return self.k.bit_length() - 1

    def __len__(self) -> int:
        return len(self.functions)


def family_capacity(k: int, kind: BentFamilyKind = BentFamilyKind.KERDOCK) -> int:
    """Number of functions the family can provide for dimension k."""
    if not is_power_of_four(k) or k < 4:
        raise DomainError(f"k must be a power of 4 with k >= 4, got {k}")
    if kind is BentFamilyKind.KERDOCK:
        return k // 2 - 1
    return int(round(k ** 0.5)) - 1


def _kerdock_tables(k: int, count: int) -> np.ndarray:
    field = get_field(k.bit_length() - 2)
    zs = np.arange(k)
    xs, es = zs >> 1, (zs & 1).astype(np.uint8)
    tables = np.empty((count, k), dtype=np.uint8)
    for row, lam in enumerate(range(1, count + 1)):
        ys = field.mul_array(lam, xs)
        tables[row] = field.second_symmetric_table[ys] ^ (es & field.trace_table[ys])
    return tables


def _quadratic_trace_tables(k: int, count: int) -> np.ndarray:
    h = (k.bit_length() - 1) // 2
    field = get_field(h)
    zs = np.arange(k)
    xy = field.mul_array(zs >> h, zs & ((1 << h) - 1))
    tables = np.empty((count, k), dtype=np.uint8)
    for row, lam in enumerate(range(1, count + 1)):
        tables[row] = field.trace_table[field.mul_array(lam, xy)]
    return tables


def verify_family_tables(tables: np.ndarray) -> None:
    """Raises VerificationError unless every row and every pairwise row sum is bent."""
    count, k = tables.shape
    single = bent_mask(tables)
    if not np.all(single):
        bad = int(np.flatnonzero(~single)[0])
        raise VerificationError(f"family member {bad} of the k={k} family is not bent")
    rows_per_batch = max(1, _PAIR_BATCH_ENTRIES // k)
    for i in range(count - 1):
        for start in range(i + 1, count, rows_per_batch):
            stop = min(start + rows_per_batch, count)
            ok = bent_mask(tables[i] ^ tables[start:stop])
            if not np.all(ok):
                j = start + int(np.flatnonzero(~ok)[0])
                raise VerificationError(f"sum of family members {i} and {j} (k={k}) is not bent")


def build_bent_family(
    k: int,
    kind: BentFamilyKind = BentFamilyKind.KERDOCK,
    size: Optional[int] = None,
) -> BentFamily:
    """
    Builds and verifies the first `size` functions of the family (all of them
    when size is None).
    """
    capacity = family_capacity(k, kind)
    count = capacity if size is None else size
    if count < 0:
        raise DomainError(f"family size must be non-negative, got {count}")
    if count > capacity:
        raise ParameterInfeasibleError(
            f"{kind.value} family for k={k} has {capacity} functions, {count} requested",
            guard="family size",
        )
    if kind is BentFamilyKind.KERDOCK:
        tables = _kerdock_tables(k, count)
    else:
        tables = _quadratic_trace_tables(k, count)
    verify_family_tables(tables)
    arity = k.bit_length() - 1
    functions = tuple(BooleanFunction(arity, row) for row in tables)
    logger.debug(f"Built {kind.value} bent family: k={k}, {count}/{capacity} functions verified")
    return BentFamily(k=k, kind=kind, functions=functions, capacity=capacity)
