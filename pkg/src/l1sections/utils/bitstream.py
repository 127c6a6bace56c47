# src/l1sections/utils/bitstream.py
import logging
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


class SignBitStream:
    """
    Seedable counter-based bit source (numpy Philox, key = seed).

    Bits are taken from the raw 64-bit words in little-endian bit order and
    every bit handed out is counted, so ``consumed`` is the honest number of
    random bits a construction used. The stream is identical on every
    platform for a given seed.
    """

    name = "philox4x64"

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = seed
        self._bitgen = np.random.Philox(key=seed)
        self._buffer = np.zeros(0, dtype=np.uint8)
        self.consumed = 0

    def _refill(self, needed: int) -> None:
        words = -(-needed // 64)
        raw = self._bitgen.random_raw(words).astype("<u8")
        bits = np.unpackbits(raw.view(np.uint8), bitorder="little")
        self._buffer = np.concatenate([self._buffer, bits])

    def bits(self, count: int) -> np.ndarray:
        """Next `count` bits as a uint8 array of 0/1."""
        if count < 0:
            raise ValueError("bit count must be non-negative")
        if self._buffer.size < count:
            self._refill(count - self._buffer.size)
        out, self._buffer = self._buffer[:count], self._buffer[count:]
        self.consumed += count
        return out

    def signs(self, rows: int, cols: int, out: Optional[np.ndarray] = None) -> np.ndarray:
        """rows x cols matrix of +1/-1, bit 1 maps to -1."""
        b = self.bits(rows * cols).reshape(rows, cols).astype(np.int8)
        signs = 1 - 2 * b
        if out is not None:
            out[...] = signs
            return out
        return signs
