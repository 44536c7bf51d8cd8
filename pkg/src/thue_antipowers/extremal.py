"""gamma(k), Gamma(k) and the finite set of odd n outside F(k).

Completeness of the complement is certified by the kappa lower bound: once
kappa_lower_bound(n) > k, every larger odd n is in F(k) too, because the
bound is nondecreasing in n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from .antipower import first_repeat
from .kappa import kappa_lower_bound


def certified_cap(k: int) -> int:
    """Smallest odd n with kappa_lower_bound(n) > k."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k < 3:
        return 1
    # kappa_lower_bound(n) = 1 + 2**(e+1) on 3*2**e <= n < 3*2**(e+1)
    e = max((k - 1).bit_length() - 1, 0)
    n = 3 * (1 << e) + 1
    while n > 1 and kappa_lower_bound(n - 2) > k:
        n -= 2
    while kappa_lower_bound(n) <= k:
        n += 2
    return n


def in_f(n: int, k: int) -> bool:
    """True iff odd ``n`` is in F(k), i.e. kappa(n) > k."""
    return first_repeat(n, k, start=kappa_lower_bound(n)) is None


@dataclass(frozen=True)
class ExtremalRecord:
    k: int
    gamma: int
    Gamma: Optional[int]
    complement: List[int] = field(default_factory=list)
    cap_used: int = 1

    def __post_init__(self):
        if self.complement != sorted(self.complement):
            raise ValueError("complement must be sorted")
        expected = self.complement[-1] if self.complement else None
        if self.Gamma != expected:
            raise ValueError("Gamma must be the largest element of the complement")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "gamma": self.gamma,
            "Gamma": self.Gamma,
            "complement": list(self.complement),
            "cap_used": self.cap_used,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExtremalRecord":
        return cls(data["k"], data["gamma"], data["Gamma"],
                   list(data["complement"]), data["cap_used"])


def gamma(k: int) -> int:
    """Least odd n whose length-kn prefix is a k-antipower."""
    n = 1
    while not in_f(n, k):
        n += 2
    return n


def complement_set(k: int) -> List[int]:
    """Every odd n whose length-kn prefix is not a k-antipower."""
    return [n for n in range(1, certified_cap(k), 2) if not in_f(n, k)]


def big_gamma(k: int) -> Optional[int]:
    """Largest odd n outside F(k); None when the complement is empty."""
    comp = complement_set(k)
    return comp[-1] if comp else None


def extremal(k: int) -> ExtremalRecord:
    cap = certified_cap(k)
    comp = [n for n in range(1, cap, 2) if not in_f(n, k)]
    g = next(n for n in range(1, cap + 1, 2) if n not in comp)
    return ExtremalRecord(k, g, comp[-1] if comp else None, comp, cap)
