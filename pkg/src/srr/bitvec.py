"""Static bit sequence with constant-probe rank and select.

Layout: raw bits packed little-endian into 64-bit words, a two-level rank
directory (512-bit superblocks, 64-bit word blocks) and sampled select hints
(superblock index of every 512-th occurrence) with an in-superblock binary
search plus word scan as the fallback. The directory is o(m) bits on top of
the raw words; `directory_bits()` reports the measured overhead.
"""

from __future__ import annotations

import numpy as np

from .model import OutOfRange

SUPER_BITS = 512
WORDS_PER_SUPER = SUPER_BITS // 64
SELECT_SAMPLE = 512


def _popcount_words(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).astype(np.int64)


class BitVector:
    __slots__ = ("m", "ones", "words", "sup", "blk", "zsup", "sel1", "sel0")

    def __init__(self, bits):
        """Build from an iterable/array of {0,1}."""
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if len(bits) and bits.max() > 1:
            raise ValueError("bits must be 0 or 1")
        self.m = len(bits)
        packed = np.packbits(bits, bitorder="little")
        n_words = (self.m + 63) // 64
        buf = np.zeros(n_words * 8, dtype=np.uint8)
        buf[: len(packed)] = packed
        self.words = buf.view(np.uint64)
        self._build_directory()

    @classmethod
    def from_words(cls, words: np.ndarray, m: int) -> "BitVector":
        """Adopt pre-packed little-endian words (trailing bits must be zero)."""
        self = cls.__new__(cls)
        self.m = int(m)
        self.words = np.ascontiguousarray(words, dtype=np.uint64)
        if len(self.words) != (self.m + 63) // 64:
            raise ValueError("word count does not match bit length")
        self._build_directory()
        return self

    def _build_directory(self):
        counts = _popcount_words(self.words)
        n_words = len(self.words)
        n_super = (n_words + WORDS_PER_SUPER - 1) // WORDS_PER_SUPER
        cum = np.zeros(n_words + 1, dtype=np.int64)
        np.cumsum(counts, out=cum[1:])
        self.ones = int(cum[-1])
        self.sup = np.ascontiguousarray(cum[:: WORDS_PER_SUPER][: n_super + 1])
        if len(self.sup) < n_super + 1:  # tail superblock is partial
            self.sup = np.concatenate([self.sup, [self.ones]]).astype(np.int64)
        # rank1 within the superblock just before each word
        word_super = np.arange(n_words, dtype=np.int64) // WORDS_PER_SUPER
        self.blk = (cum[:-1] - self.sup[word_super]).astype(np.uint16)
        starts = np.minimum(
            np.arange(len(self.sup), dtype=np.int64) * SUPER_BITS, self.m
        )
        self.zsup = starts - self.sup
        self.sel1 = self._select_samples(self.ones, ones=True)
        self.sel0 = self._select_samples(self.m - self.ones, ones=False)

    def _select_samples(self, total: int, ones: bool) -> np.ndarray:
        """Superblock index holding every (k*SELECT_SAMPLE + 1)-th occurrence."""
        if total == 0:
            return np.zeros(1, dtype=np.int32)
        targets = np.arange(0, total, SELECT_SAMPLE, dtype=np.int64) + 1
        sup = self.sup if ones else self.zsup
        idx = np.searchsorted(sup, targets, side="left") - 1
        return np.concatenate([idx, [len(sup) - 2]]).astype(np.int32)

    # ---- queries ------------------------------------------------------

    def get(self, pos: int) -> int:
        """Bit at 0-based position."""
        return int((self.words[pos >> 6] >> np.uint64(pos & 63)) & np.uint64(1))

    def rank(self, bit: int, i: int) -> int:
        """Occurrences of `bit` among the first i positions (i in [0..m])."""
        if not 0 <= i <= self.m:
            raise OutOfRange(f"rank position {i} outside [0..{self.m}]")
        ones = self._rank1(i)
        return ones if bit else i - ones

    def _rank1(self, i: int) -> int:
        if i == 0:
            return 0
        w = (i - 1) >> 6
        r = int(self.sup[w >> 3]) + int(self.blk[w])
        rem = i - (w << 6)
        word = int(self.words[w])
        if rem < 64:
            word &= (1 << rem) - 1
        return r + word.bit_count()

    def select(self, bit: int, j: int) -> int:
        """1-based position of the j-th occurrence of `bit`."""
        total = self.ones if bit else self.m - self.ones
        if not 1 <= j <= total:
            raise OutOfRange(f"select index {j} outside [1..{total}]")
        if bit:
            sup, samples = self.sup, self.sel1
        else:
            sup, samples = self.zsup, self.sel0
        k = (j - 1) // SELECT_SAMPLE
        lo = int(samples[k])
        hi = int(samples[min(k + 1, len(samples) - 1)])
        # superblock s holds the j-th bit iff sup[s] < j <= sup[s+1]
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if int(sup[mid]) < j:
                lo = mid
            else:
                hi = mid - 1
        rem = j - int(sup[lo])
        w0 = lo * WORDS_PER_SUPER
        w1 = min(w0 + WORDS_PER_SUPER, len(self.words))
        for w in range(w0, w1):
            word = int(self.words[w])
            if not bit:
                word = ~word & 0xFFFFFFFFFFFFFFFF
                if w == len(self.words) - 1 and self.m & 63:
                    word &= (1 << (self.m & 63)) - 1
            c = word.bit_count()
            if rem <= c:
                return (w << 6) + _select_in_word(word, rem) + 1
            rem -= c
        raise AssertionError("select directory inconsistent")

    def to_array(self) -> np.ndarray:
        out = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return out[: self.m]

    def raw_bits(self) -> int:
        return len(self.words) * 64

    def directory_bits(self) -> int:
        return (
            self.sup.nbytes
            + self.blk.nbytes
            + self.zsup.nbytes
            + self.sel1.nbytes
            + self.sel0.nbytes
        ) * 8


def _select_in_word(word: int, j: int) -> int:
    """0-based position of the j-th set bit of `word` (1 <= j <= popcount)."""
    pos = 0
    for width in (32, 16, 8, 4, 2, 1):
        half = (word & ((1 << width) - 1)).bit_count()
        if j > half:
            j -= half
            word >>= width
            pos += width
    return pos


def build_bitvector(bits) -> BitVector:
    return BitVector(bits)


def rank(v: BitVector, bit: int, i: int) -> int:
    return v.rank(bit, i)


def select(v: BitVector, bit: int, j: int) -> int:
    return v.select(bit, j)
