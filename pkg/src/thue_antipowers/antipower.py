"""Antipower tests and block machinery for prefixes of the Thue-Morse word.

Blocks are 1-indexed: block ``c`` of length ``n`` is t_{(c-1)n} .. t_{cn-1}.

Two facts drive the fast path. If two ordinals differ by ``D = q * 2**e``
with ``q`` odd, the blocks are equal exactly when t_x == t_{x + q*n} for
every x between floor((c-1)n / 2**e) and floor((cn - 1) / 2**e): the low
``e`` bits of matching positions agree, so only the high parts matter.
Second, for odd ``n`` equal blocks have ordinals congruent mod 2**i for
the largest i with 3 * 2**(i-1) < n, so only differences that are
multiples of 2**i need checking, and each check touches at most 4 letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ParityError, ResourceLimitError
from .tm_core import FiniteWord, parity_array, tm_factor, tm_prefix

Witness = Tuple[int, int]

# Products c*n handled by the vectorized search must stay inside int64.
_INT64_SAFE = 1 << 62


def _require_odd(n: int) -> None:
    if n < 1 or n % 2 == 0:
        raise ParityError(f"block length must be an odd positive integer, got {n}")


@dataclass(frozen=True)
class BlockRef:
    """The ``c``-th block of length ``n`` (1-indexed)."""

    n: int
    c: int

    def __post_init__(self):
        _require_odd(self.n)
        if self.c < 1:
            raise ValueError(f"block ordinal must be >= 1, got {self.c}")

    @property
    def start(self) -> int:
        return (self.c - 1) * self.n

    def word(self) -> FiniteWord:
        return tm_factor(self.start, self.n)


@dataclass(frozen=True)
class ShiftCriterionQuery:
    """Compare block ordinals ``c + 1`` and ``c + 1 + 2**i``."""

    n: int
    c: int
    i: int

    def __post_init__(self):
        _require_odd(self.n)
        if self.c < 0 or self.i < 0:
            raise ValueError("c and i must be nonnegative")

    @property
    def x_range(self) -> range:
        lo = (self.c * self.n) >> self.i
        hi = ((self.c + 1) * self.n - 1) >> self.i
        return range(lo, hi + 1)


@dataclass(frozen=True)
class AntipowerVerdict:
    is_antipower: bool
    witness: Optional[Witness] = None

    def __post_init__(self):
        if self.is_antipower != (self.witness is None):
            raise ValueError("a witness is present exactly when the word is not an antipower")
        if self.witness is not None:
            c, c2 = self.witness
            if not 1 <= c < c2:
                raise ValueError(f"bad witness ordering {self.witness}")

    def to_dict(self) -> dict:
        return {
            "is_antipower": self.is_antipower,
            "witness": list(self.witness) if self.witness else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AntipowerVerdict":
        w = data.get("witness")
        return cls(data["is_antipower"], tuple(w) if w else None)


def is_antipower_word(w: FiniteWord, k: int) -> AntipowerVerdict:
    """Split ``w`` into ``k`` equal blocks and look for a repeat.

    The witness is the first repeat in reading order: smallest second
    ordinal, paired with the earliest block it equals.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if len(w) % k:
        raise ValueError(f"word length {len(w)} is not divisible by k={k}")
    n = len(w) // k
    mask = (1 << n) - 1
    first_seen: dict[int, int] = {}
    for c in range(1, k + 1):
        block = (w.bits >> ((k - c) * n)) & mask
        earlier = first_seen.setdefault(block, c)
        if earlier != c:
            return AntipowerVerdict(False, (earlier, c))
    return AntipowerVerdict(True)


def tm_blocks_equal_direct(a: BlockRef, b: BlockRef) -> bool:
    """Materialize both blocks and compare them letter for letter."""
    if a.n != b.n:
        raise ValueError(f"block lengths differ: {a.n} != {b.n}")
    return a.word() == b.word()


def tm_blocks_equal_shift(q: ShiftCriterionQuery) -> bool:
    """Equality of blocks ``c+1`` and ``c+1+2**i`` via x ~ x+n on the reduced range."""
    n = q.n
    return all(not ((x.bit_count() ^ (x + n).bit_count()) & 1) for x in q.x_range)


def blocks_equal(n: int, c: int, c2: int) -> bool:
    """Equality of blocks ``c`` and ``c2`` of length ``n`` for any ordinal difference."""
    if c < 1 or c2 < 1:
        raise ValueError("block ordinals start at 1")
    if c == c2:
        return True
    if c > c2:
        c, c2 = c2, c
    diff = c2 - c
    e = (diff & -diff).bit_length() - 1
    shift = (diff >> e) * n
    lo = ((c - 1) * n) >> e
    hi = (c * n - 1) >> e
    return all(not ((x.bit_count() ^ (x + shift).bit_count()) & 1) for x in range(lo, hi + 1))


def pruning_exponent(n: int) -> int:
    """Largest i >= 0 with 3 * 2**(i-1) < n (0 when no positive i qualifies)."""
    _require_odd(n)
    i = 0
    while 3 << i < n:  # does i + 1 qualify: 3 * 2**i < n
        i += 1
    return i


def matching_pair_congruence_check(a: BlockRef, b: BlockRef) -> bool:
    """Whether the ordinals agree mod 2**i, i = pruning_exponent(n).

    Meant to be applied to blocks already known to be equal.
    """
    if a.n != b.n:
        raise ValueError(f"block lengths differ: {a.n} != {b.n}")
    return (a.c - b.c) % (1 << pruning_exponent(a.n)) == 0


def _scan_window(n: int, lo_ord: int, hi_ord: int, step: int,
                 parity: np.ndarray) -> Optional[Witness]:
    """Smallest repeat with second ordinal in [lo_ord, hi_ord], differences multiple of ``step``."""
    best: Optional[Witness] = None
    for diff in range(step, hi_ord, step):
        first = max(lo_ord - diff, 1)
        last = hi_ord - diff
        if first > last:
            continue
        e = (diff & -diff).bit_length() - 1
        shift = (diff >> e) * n
        c0 = np.arange(first - 1, last, dtype=np.int64)  # zero-indexed first ordinal
        lo = (c0 * n) >> e
        hi = ((c0 + 1) * n - 1) >> e
        span = int((hi - lo).max())
        equal = np.ones(c0.size, dtype=bool)
        for j in range(span + 1):
            x = lo + j
            active = x <= hi
            x = np.where(active, x, lo)
            equal &= ~active | (parity[x] == parity[x + shift])
        hits = np.flatnonzero(equal)
        if hits.size:
            c = int(c0[hits[0]]) + 1
            cand = (c, c + diff)
            if best is None or (cand[1], cand[0]) < (best[1], best[0]):
                best = cand
    return best


def first_repeat(n: int, limit: int, start: int = 2) -> Optional[Witness]:
    """First pair of equal blocks (c, c') with c' <= ``limit``, or None.

    Searches second ordinals upward from ``start`` (callers must know no
    repeat exists below it) in doubling windows, restricted to pairs whose
    ordinals agree mod 2**pruning_exponent(n).
    """
    _require_odd(n)
    if limit < 2:
        return None
    step = 1 << pruning_exponent(n)
    lo_ord = max(start, 2)
    window = max(lo_ord, 2 * step, 16)
    while lo_ord <= limit:
        hi_ord = min(window, limit)
        if hi_ord * n >= _INT64_SAFE:
            raise ResourceLimitError(f"search of {hi_ord} blocks of length {n} exceeds int64 range")
        # largest index touched: floor(hi_ord * n / 2**e) + q*n <= hi_ord * n / step * 2 + n
        top = (hi_ord * n) // step + (hi_ord // step) * n + n + 4
        parity = parity_array(0, top)
        hit = _scan_window(n, lo_ord, hi_ord, step, parity)
        if hit is not None:
            return hit
        lo_ord = hi_ord + 1
        window *= 2
    return None


def tm_prefix_is_antipower(n: int, k: int) -> AntipowerVerdict:
    """Is the length-kn prefix of t a k-antipower? (odd ``n``, pruned search)"""
    _require_odd(n)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    hit = first_repeat(n, k)
    return AntipowerVerdict(hit is None, hit)


def prefix_verdict(n: int, k: int) -> AntipowerVerdict:
    """Antipower verdict for the length-kn prefix by materializing it (any ``n``)."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return is_antipower_word(tm_prefix(n * k), k)


def ap_membership(n: int, k: int) -> bool:
    """True iff n is in AP(t, k). Accepts even ``n``; no pruning is assumed."""
    return prefix_verdict(n, k).is_antipower
