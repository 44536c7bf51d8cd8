"""Implicit access to the Thue-Morse word.

Letters are computed from the parity of the binary digit sum, so no prefix
is ever materialized just to read one letter. Finite words are stored packed
in a Python ``int`` (first letter in the most significant position).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError

# Largest factor (in letters) that tm_prefix / tm_factor will build.
MAX_WORD_LETTERS = 1 << 28


def _check_index(n: int) -> None:
    if n < 0:
        raise ValueError(f"letter index must be nonnegative, got {n}")


def tm_letter(n: int) -> int:
    """Return t_n, the parity of the number of 1 bits of ``n``."""
    _check_index(n)
    return n.bit_count() & 1


def tm_equiv(n: int, m: int) -> bool:
    """True iff t_n == t_m."""
    _check_index(n)
    _check_index(m)
    return not ((n.bit_count() ^ m.bit_count()) & 1)


def generalized_letter(base: int, n: int) -> int:
    """Digit sum of ``n`` written in ``base``, reduced mod ``base``."""
    if base < 2:
        raise ValueError(f"base must be at least 2, got {base}")
    _check_index(n)
    if base == 2:
        return n.bit_count() & 1
    total = 0
    while n:
        n, digit = divmod(n, base)
        total += digit
    return total % base


@dataclass(frozen=True)
class FiniteWord:
    """A binary word packed into an integer.

    Letter 0 is the most significant of ``length`` bits, so ``bits`` read in
    binary with leading zeros restored is the word itself.
    """

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits do not fit in the stated length")

    @classmethod
    def from_string(cls, text: str) -> "FiniteWord":
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a binary word: {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    @classmethod
    def from_bits(cls, letters) -> "FiniteWord":
        """Build from a sequence (or uint8 array) of 0/1 letters."""
        arr = np.asarray(letters, dtype=np.uint8)
        if arr.size == 0:
            return cls(0, 0)
        if arr.max() > 1:
            raise ValueError("letters must be 0 or 1")
        pad = (-arr.size) % 8
        packed = np.packbits(arr).tobytes()
        return cls(int(arr.size), int.from_bytes(packed, "big") >> pad)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> (self.length - 1 - j)) & 1

    def __str__(self) -> str:
        return format(self.bits, f"0{self.length}b") if self.length else ""

    def to_array(self) -> np.ndarray:
        if self.length == 0:
            return np.zeros(0, dtype=np.uint8)
        nbytes = (self.length + 7) // 8
        raw = (self.bits << (nbytes * 8 - self.length)).to_bytes(nbytes, "big")
        return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[: self.length]

    def factor(self, start: int, length: int) -> "FiniteWord":
        """The sub-word of ``length`` letters beginning at ``start``."""
        if start < 0 or length < 0 or start + length > self.length:
            raise IndexError((start, length))
        shift = self.length - start - length
        return FiniteWord(length, (self.bits >> shift) & ((1 << length) - 1))

    def contains(self, pattern: str) -> bool:
        return pattern in str(self)


def _check_size(length: int, limit: int | None) -> None:
    limit = MAX_WORD_LETTERS if limit is None else limit
    if length > limit:
        raise ResourceLimitError(f"requested {length} letters, cap is {limit}")


def parity_array(start: int, stop: int) -> np.ndarray:
    """t_start .. t_{stop-1} as a uint8 array (vectorized popcount parity)."""
    if start < 0 or stop < start:
        raise ValueError((start, stop))
    idx = np.arange(start, stop, dtype=np.uint64)
    return (np.bitwise_count(idx) & 1).astype(np.uint8)


def tm_factor(start: int, length: int, limit: int | None = None) -> FiniteWord:
    """t_start .. t_{start+length-1}."""
    _check_index(start)
    if length < 0:
        raise ValueError("length must be nonnegative")
    _check_size(length, limit)
    if start + length <= 1 << 63:
        return FiniteWord.from_bits(parity_array(start, start + length))
    # Past uint64 range: fall back to Python ints.
    return FiniteWord.from_bits([(start + j).bit_count() & 1 for j in range(length)])


def tm_prefix(length: int, limit: int | None = None) -> FiniteWord:
    """t_0 .. t_{length-1}."""
    return tm_factor(0, length, limit)
