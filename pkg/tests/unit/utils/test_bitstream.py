# tests/unit/utils/test_bitstream.py
import numpy as np
import pytest

from l1sections.utils.bitstream import SignBitStream
from l1sections.utils.hash import content_digest, matrix_digest


def test_every_bit_is_counted():
    stream = SignBitStream(4)
    stream.bits(3)
    stream.signs(5, 7)
    stream.bits(0)
    assert stream.consumed == 3 + 35


def test_chunking_does_not_change_the_stream():
    whole = SignBitStream(21).bits(200)
    pieces = SignBitStream(21)
    chunked = np.concatenate([pieces.bits(n) for n in (1, 63, 64, 72)])
    assert np.array_equal(whole, chunked)


def test_signs_are_plus_or_minus_one():
    signs = SignBitStream(0).signs(16, 16)
    assert set(np.unique(signs).tolist()) <= {-1, 1}
    assert signs.shape == (16, 16)
    out = np.zeros((2, 3), dtype=np.int8)
    assert SignBitStream(0).signs(2, 3, out=out) is out


def test_seeds_give_different_streams():
    assert not np.array_equal(SignBitStream(1).bits(128), SignBitStream(2).bits(128))


def test_bad_arguments():
    with pytest.raises(ValueError, match="non-negative"):
        SignBitStream(-1)
    with pytest.raises(ValueError):
        SignBitStream(0).bits(-2)


def test_matrix_digest_is_a_sha256_prefix():
    text = "CHECK 0 3 0\n"
    assert matrix_digest(text) == content_digest(text)[:16]
    assert content_digest(text) == content_digest(text.encode("utf-8"))
    assert len(matrix_digest(text, length=8)) == 8
