"""Ratio sweeps for kappa(n)/n, gamma(k)/k, Gamma(k)/k and the conjecture scan.

All ratios are kept as exact fractions; decimals appear only when rendering.
Functions that fan out over many indices take an optional ``mapper`` with
the signature of the builtin ``map`` so callers can supply an ordered
process-pool map.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .extremal import certified_cap
from .kappa import KappaRecord, kappa

Mapper = Callable

# Observed on k in [1024, 4096]: max of gamma(k) - 3k/2 and of Gamma(k) - 3k.
BAND_RANGE = (1024, 4096)
BAND_C_GAMMA = Fraction(-22)
BAND_C_BIG_GAMMA = Fraction(-120)


def format_ratio(fr: Fraction, places: int = 6) -> str:
    """Round half up to ``places`` decimals using integer arithmetic."""
    scale = 10 ** places
    sign = "-" if fr < 0 else ""
    fr = abs(fr)
    q = (2 * fr.numerator * scale + fr.denominator) // (2 * fr.denominator)
    whole, frac = divmod(q, scale)
    return f"{sign}{whole}.{frac:0{places}d}"


@dataclass(frozen=True)
class RatioSample:
    index: int
    value: int
    witness: Optional[Tuple[int, int]] = None

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.value, self.index)

    def to_dict(self) -> dict:
        r = self.ratio
        return {
            "index": self.index,
            "value": self.value,
            "ratio_num": r.numerator,
            "ratio_den": r.denominator,
            "witness": list(self.witness) if self.witness else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RatioSample":
        sample = cls(data["index"], data["value"],
                     tuple(data["witness"]) if data.get("witness") else None)
        if sample.ratio != Fraction(data["ratio_num"], data["ratio_den"]):
            raise ValueError("stored ratio does not match value/index")
        return sample


def _kappa_record(n: int) -> KappaRecord:
    return kappa(n)


def kappa_table(ns: Sequence[int], mapper: Mapper = map) -> List[KappaRecord]:
    return list(mapper(_kappa_record, ns))


def sweep_kappa(n_lo: int, n_hi: int, mapper: Mapper = map) -> List[RatioSample]:
    """One sample per odd n in [n_lo, n_hi]."""
    if n_lo % 2 == 0 or n_hi % 2 == 0:
        raise ValueError("sweep bounds must be odd")
    ns = range(max(n_lo, 1), n_hi + 1, 2)
    return [RatioSample(r.n, r.kappa, r.witness) for r in kappa_table(ns, mapper)]


KAPPA_CSV_FIELDS = ("n", "kappa", "witness_c", "witness_cprime",
                    "ratio_num", "ratio_den", "ratio")


def kappa_rows(samples: Sequence[RatioSample]) -> List[dict]:
    rows = []
    for s in samples:
        r = s.ratio
        rows.append({
            "n": s.index, "kappa": s.value,
            "witness_c": s.witness[0], "witness_cprime": s.witness[1],
            "ratio_num": r.numerator, "ratio_den": r.denominator,
            "ratio": format_ratio(r),
        })
    return rows


@dataclass(frozen=True)
class ExtremalSample:
    k: int
    gamma: int
    Gamma: Optional[int]
    cap_used: int

    @property
    def gamma_ratio(self) -> Fraction:
        return Fraction(self.gamma, self.k)

    @property
    def Gamma_ratio(self) -> Optional[Fraction]:
        return None if self.Gamma is None else Fraction(self.Gamma, self.k)

    @property
    def gap_ratio(self) -> Optional[Fraction]:
        return None if self.Gamma is None else Fraction(self.Gamma - self.gamma, self.k)

    def to_dict(self) -> dict:
        out = {"k": self.k, "gamma": self.gamma, "Gamma": self.Gamma, "cap_used": self.cap_used}
        for name in ("gamma", "Gamma", "gap"):
            r = getattr(self, f"{name}_ratio")
            out[f"ratio_{name}_num"] = None if r is None else r.numerator
            out[f"ratio_{name}_den"] = None if r is None else r.denominator
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExtremalSample":
        s = cls(data["k"], data["gamma"], data["Gamma"], data["cap_used"])
        if s.gamma_ratio != Fraction(data["ratio_gamma_num"], data["ratio_gamma_den"]):
            raise ValueError("stored gamma ratio does not match")
        return s


def sweep_extremal(k_lo: int, k_hi: int, mapper: Mapper = map) -> List[ExtremalSample]:
    """gamma, Gamma and the certified cap for every k in [k_lo, k_hi].

    kappa is computed once for every odd n up to the certified cap of k_hi.
    """
    if k_lo < 1 or k_hi < k_lo:
        return []
    top = certified_cap(k_hi)
    ns = np.arange(1, top + 1, 2, dtype=np.int64)
    ks = np.array([r.kappa for r in kappa_table(ns.tolist(), mapper)], dtype=np.int64)
    running_max = np.maximum.accumulate(ks)
    out = []
    for k in range(k_lo, k_hi + 1):
        cap = certified_cap(k)
        g = int(ns[np.searchsorted(running_max, k, side="right")])
        below = np.flatnonzero((ks <= k) & (ns < cap))
        big = int(ns[below[-1]]) if below.size else None
        out.append(ExtremalSample(k, g, big, cap))
    return out


EXTREMAL_CSV_FIELDS = (
    "index", "value_gamma", "value_Gamma",
    "ratio_gamma_num", "ratio_gamma_den",
    "ratio_Gamma_num", "ratio_Gamma_den",
    "ratio_gap_num", "ratio_gap_den",
    "cap_used", "ratio_gamma", "ratio_Gamma", "ratio_gap",
)


def extremal_rows(samples: Sequence[ExtremalSample]) -> List[dict]:
    rows = []
    for s in samples:
        d = s.to_dict()
        rows.append({
            "index": s.k, "value_gamma": s.gamma, "value_Gamma": s.Gamma,
            **{f: d[f] for f in EXTREMAL_CSV_FIELDS[3:9]},
            "cap_used": s.cap_used,
            "ratio_gamma": format_ratio(s.gamma_ratio),
            "ratio_Gamma": "" if s.Gamma is None else format_ratio(s.Gamma_ratio),
            "ratio_gap": "" if s.Gamma is None else format_ratio(s.gap_ratio),
        })
    return rows


def to_csv(rows: Sequence[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({f: "" if row.get(f) is None else row[f] for f in fields})
    return buf.getvalue()


def dyadic_summary(samples: Sequence[ExtremalSample]) -> List[dict]:
    """Min and max of each ratio over k in [2^i, 2^(i+1)) for every block touched."""
    blocks: Dict[int, List[ExtremalSample]] = {}
    for s in samples:
        blocks.setdefault(s.k.bit_length() - 1, []).append(s)
    out = []
    for i in sorted(blocks):
        group = blocks[i]
        entry = {"i": i, "k_first": group[0].k, "k_last": group[-1].k}
        for name in ("gamma", "Gamma", "gap"):
            vals = [getattr(s, f"{name}_ratio") for s in group]
            vals = [v for v in vals if v is not None]
            entry[f"{name}_min"] = min(vals) if vals else None
            entry[f"{name}_max"] = max(vals) if vals else None
        out.append(entry)
    return out


def dyadic_rows(summary: Sequence[dict]) -> List[dict]:
    rows = []
    for e in summary:
        row = {"i": e["i"], "k_first": e["k_first"], "k_last": e["k_last"]}
        for key in ("gamma_min", "gamma_max", "Gamma_min", "Gamma_max", "gap_min", "gap_max"):
            v = e[key]
            row[key] = "" if v is None else f"{v.numerator}/{v.denominator}"
            row[key + "_dec"] = "" if v is None else format_ratio(v)
        rows.append(row)
    return rows


DYADIC_CSV_FIELDS = ("i", "k_first", "k_last",
                     "gamma_min", "gamma_min_dec", "gamma_max", "gamma_max_dec",
                     "Gamma_min", "Gamma_min_dec", "Gamma_max", "Gamma_max_dec",
                     "gap_min", "gap_min_dec", "gap_max", "gap_max_dec")


def band_excess(samples: Sequence[ExtremalSample]) -> Tuple[Fraction, Fraction]:
    """(max gamma(k) - 3k/2, max Gamma(k) - 3k) over the samples."""
    c_gamma = max(Fraction(s.gamma) - Fraction(3 * s.k, 2) for s in samples)
    c_big = max(Fraction(s.Gamma - 3 * s.k) for s in samples if s.Gamma is not None)
    return c_gamma, c_big


def band_violations(samples: Sequence[ExtremalSample],
                    c_gamma: Fraction = BAND_C_GAMMA,
                    c_big: Fraction = BAND_C_BIG_GAMMA) -> List[int]:
    bad = []
    for s in samples:
        if s.gamma > Fraction(3 * s.k, 2) + c_gamma:
            bad.append(s.k)
        elif s.Gamma is not None and s.Gamma > 3 * s.k + c_big:
            bad.append(s.k)
    return bad


@dataclass(frozen=True)
class ConjectureScanRecord:
    i: int
    margin: Fraction
    reference: int
    window_first: Optional[int]
    window_last: Optional[int]
    window_size: int
    violations: Tuple[int, ...] = ()

    def __post_init__(self):
        for n in self.violations:
            if self.window_first is None or not self.window_first <= n <= self.window_last:
                raise ValueError(f"violation {n} outside the window")

    @property
    def empty_window(self) -> bool:
        return self.window_size == 0

    @property
    def violation_fraction(self) -> Fraction:
        return Fraction(len(self.violations), self.window_size) if self.window_size else Fraction(0)

    def to_dict(self) -> dict:
        vf = self.violation_fraction
        return {
            "i": self.i,
            "margin": f"{self.margin.numerator}/{self.margin.denominator}",
            "reference": self.reference,
            "window_first": self.window_first,
            "window_last": self.window_last,
            "window_size": self.window_size,
            "empty_window": self.empty_window,
            "violations": list(self.violations),
            "violation_fraction": f"{vf.numerator}/{vf.denominator}",
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConjectureScanRecord":
        return cls(data["i"], Fraction(data["margin"]), data["reference"],
                   data["window_first"], data["window_last"], data["window_size"],
                   tuple(data["violations"]))


def conjecture_window(i: int, margin: Fraction) -> range:
    """Odd n with 3*2^i < n < 2^(i+2) * (1 - margin)."""
    margin = Fraction(margin)
    if not 0 <= margin < 1:
        raise ValueError("margin must lie in [0, 1)")
    upper = Fraction(1 << (i + 2)) * (1 - margin)
    last = int(upper) if upper.denominator != 1 else int(upper) - 1
    if last % 2 == 0:
        last -= 1
    first = 3 * (1 << i) + 1
    return range(first, max(last + 2, first), 2)


def conjecture_scan(i: int, margin: Fraction, mapper: Mapper = map) -> ConjectureScanRecord:
    """List n in the window whose kappa exceeds kappa(3*2^i + 1). No claim is made either way."""
    margin = Fraction(margin)
    window = conjecture_window(i, margin)
    ref = kappa(3 * (1 << i) + 1).kappa
    recs = kappa_table(list(window), mapper)
    viol = tuple(r.n for r in recs if r.kappa > ref)
    if not window:
        return ConjectureScanRecord(i, margin, ref, None, None, 0, ())
    return ConjectureScanRecord(i, margin, ref, window[0], window[-1], len(window), viol)
