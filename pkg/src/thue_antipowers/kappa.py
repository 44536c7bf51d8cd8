"""The threshold function: least k whose length-kn prefix is not a k-antipower."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from .antipower import _require_odd, blocks_equal, first_repeat
from .errors import CapExceededError

# Working cap on block ordinals. The pigeonhole bound 2**n + 1 is never used.
DEFAULT_CAP = 1 << 24


@dataclass(frozen=True)
class KappaRecord:
    n: int
    kappa: int
    witness: Tuple[int, int]

    def __post_init__(self):
        c, c2 = self.witness
        if not 1 <= c < c2 == self.kappa:
            raise ValueError(f"witness {self.witness} inconsistent with kappa={self.kappa}")

    def to_dict(self) -> dict:
        return {"n": self.n, "kappa": self.kappa, "witness": list(self.witness)}

    @classmethod
    def from_dict(cls, data: dict) -> "KappaRecord":
        return cls(data["n"], data["kappa"], tuple(data["witness"]))


def kappa_lower_bound(n: int) -> int:
    """1 + 2**(1 + floor(log2(n/3))) for n >= 3; 3 for n = 1."""
    _require_odd(n)
    if n == 1:
        return 3
    return 1 + (1 << (n // 3).bit_length())


def kappa(n: int, cap: Optional[int] = None) -> KappaRecord:
    """Compute the threshold for odd ``n`` together with its witness pair."""
    _require_odd(n)
    cap = DEFAULT_CAP if cap is None else cap
    hit = first_repeat(n, cap, start=kappa_lower_bound(n))
    if hit is None:
        raise CapExceededError(n, cap, cap)
    return KappaRecord(n, hit[1], hit)


def kappa_at_most(n: int, bound: int) -> Optional[KappaRecord]:
    """The record if kappa(n) <= bound, else None."""
    _require_odd(n)
    hit = first_repeat(n, bound, start=kappa_lower_bound(n))
    return None if hit is None else KappaRecord(n, hit[1], hit)


def check_record(rec: KappaRecord) -> bool:
    """Cheap consistency check: witness blocks equal and kappa above the lower bound."""
    return blocks_equal(rec.n, *rec.witness) and rec.kappa >= kappa_lower_bound(rec.n)
