"""Finite-range checks of the structural lemmas about the threshold function.

Each verifier returns a :class:`LemmaReport` with one record per grid point.
Bound lemmas fail only with an explicit kappa record above the bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .antipower import ShiftCriterionQuery, tm_blocks_equal_shift
from .errors import CapExceededError, InfeasibleParametersError
from .kappa import kappa, kappa_at_most
from .tm_core import parity_array, tm_equiv

# Residues used to line up x, x+1, x+2 with x+n, x+n+1, x+n+2.
PHI: Dict[int, int] = {
    3: 15, 11: 15, -5: 15, -13: 15,
    5: 10,
    1: 2, 13: 2,
    -1: 3,
    -3: 18,
    -11: 26,
}
PHI_EQUIVALENT = frozenset({3, -3, 5, -5})
PHI_INEQUIVALENT = frozenset({1, -1, 11, 13, -11, -13})

PSI: Dict[int, int] = {1: 2, 5: 3, 11: 0, 13: 3}

OFFSETS_8X = (1, -1)
OFFSETS_32X = (3, -3, 5, -5, 11, -11, 13, -13)
OFFSETS_CLOSE = tuple(sorted(PHI, key=lambda d: (abs(d), -d)))

EXACT_FAMILIES = ("2^i+1", "2^i+3", "2^2i-3")


@dataclass(frozen=True)
class DigitTable:
    kind: str
    entries: Dict[int, int]


PHI_TABLE = DigitTable("phi", PHI)
PSI_TABLE = DigitTable("psi", PSI)


@dataclass(frozen=True)
class FamilyDecomposition:
    """n = a * 2**j + d with a odd; m = a * 2**(j - shift) for the lemma's shift."""

    n: int
    a: int
    j: int
    d: int
    i: Optional[int] = None

    def __post_init__(self):
        if self.a % 2 == 0 or self.a * (1 << self.j) + self.d != self.n:
            raise ValueError(f"not a valid decomposition: {self}")

    def m(self, shift: int) -> int:
        return self.a << (self.j - shift)

    def to_dict(self) -> dict:
        return {"n": self.n, "a": self.a, "j": self.j, "d": self.d}


def decompose(n: int, offsets: Iterable[int], j_min: int = 0) -> List[FamilyDecomposition]:
    """Every (a, j, d) with d in ``offsets``, a odd and j >= j_min."""
    out = []
    for d in offsets:
        r = n - d
        if r <= 0:
            continue
        j = (r & -r).bit_length() - 1
        if j >= j_min:
            out.append(FamilyDecomposition(n, r >> j, j, d))
    return out


def middle_range(i: int) -> range:
    """Odd n with 2**i < n < 3 * 2**(i-1)."""
    return range((1 << i) + 1, 3 << (i - 1), 2)


@dataclass
class GridRecord:
    params: dict
    verdict: bool
    counterexample: Optional[dict] = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "verdict": self.verdict,
            "counterexample": self.counterexample,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GridRecord":
        return cls(data["params"], data["verdict"], data.get("counterexample"),
                   data.get("detail", {}))


@dataclass
class LemmaReport:
    lemma_id: str
    records: List[GridRecord] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def parameter_grid(self) -> List[dict]:
        return [r.params for r in self.records]

    @property
    def verdicts(self) -> List[bool]:
        return [r.verdict for r in self.records]

    @property
    def counterexamples(self) -> List[dict]:
        return [r.counterexample for r in self.records if r.counterexample is not None]

    @property
    def passed(self) -> bool:
        return all(self.verdicts)

    def add(self, params: dict, verdict: bool, counterexample=None, **detail) -> None:
        self.records.append(GridRecord(params, bool(verdict), counterexample, detail))

    def to_dict(self) -> dict:
        return {
            "lemma_id": self.lemma_id,
            "passed": self.passed,
            "records": [r.to_dict() for r in self.records],
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LemmaReport":
        return cls(data["lemma_id"], [GridRecord.from_dict(r) for r in data["records"]],
                   list(data.get("notes", [])))

    def to_text(self) -> str:
        """One tab-separated line per grid point: id, params, verdict, counterexample."""
        lines = []
        for r in self.records:
            params = ",".join(f"{k}={v}" for k, v in r.params.items())
            cex = json.dumps(r.counterexample, sort_keys=True) if r.counterexample else "-"
            lines.append(f"{self.lemma_id}\t{params}\t{'PASS' if r.verdict else 'FAIL'}\t{cex}")
        lines.extend(f"# {note}" for note in self.notes)
        return "\n".join(lines)

    def extend(self, other: "LemmaReport") -> "LemmaReport":
        self.records.extend(other.records)
        for note in other.notes:
            if note not in self.notes:
                self.notes.append(note)
        return self


def merge_reports(reports: Sequence[LemmaReport]) -> LemmaReport:
    if not reports:
        raise ValueError("nothing to merge")
    out = LemmaReport(reports[0].lemma_id)
    for rep in reports:
        out.extend(rep)
    return out


def holding_threshold(report: LemmaReport, key: str = "i") -> Optional[int]:
    """Least tested value of ``key`` from which every record passes; None if the top one fails."""
    by_key: Dict[int, bool] = {}
    for r in report.records:
        v = r.params[key]
        by_key[v] = by_key.get(v, True) and r.verdict
    threshold = None
    for v in sorted(by_key, reverse=True):
        if not by_key[v]:
            break
        threshold = v
    return threshold


def _bound_check(report: LemmaReport, params: dict, n: int, bound: int, **detail) -> None:
    rec = kappa_at_most(n, bound)
    if rec is not None:
        report.add(params, True, kappa=rec.kappa, witness=list(rec.witness), bound=bound, **detail)
        return
    try:
        cex = kappa(n).to_dict()
    except CapExceededError as exc:
        cex = {"n": n, "kappa_exceeds": exc.cap}
    report.add(params, False, cex, bound=bound, **detail)


def verify_digit_tables(psi_exponents: Iterable[int] = range(5, 64)) -> LemmaReport:
    """Exhaustive check of the phi and psi residue tables."""
    report = LemmaReport("digit-tables")
    for d in sorted(PHI):
        phi = PHI[d]
        want = d in PHI_EQUIVALENT
        for s in (0, 1, 2):
            got = tm_equiv(d + phi + s, phi + s)
            report.add({"table": "phi", "d": d, "s": s}, got == want,
                       None if got == want else {"lhs": d + phi + s, "rhs": phi + s,
                                                  "expected_equivalent": want},
                       equivalent=got)
    for i in psi_exponents:
        base = 1 << i
        for d in sorted(PSI):
            psi = PSI[d]
            for s in (0, 1):
                ok = tm_equiv(psi + s, base + d + psi + s)
                report.add({"table": "psi", "d": d, "i": i, "s": s}, ok,
                           None if ok else {"lhs": psi + s, "rhs": base + d + psi + s})
        # d = 3 is handled with a shift of 2**(i-1): 2^i+11+s ~ 2^(i+1)+14+s
        for s in (0, 1, 2):
            ok = tm_equiv(base + 11 + s, 2 * base + 14 + s)
            report.add({"table": "psi", "d": 3, "i": i, "s": s}, ok,
                       None if ok else {"lhs": base + 11 + s, "rhs": 2 * base + 14 + s})
    return report


def verify_8x_family(i: int, j_min: int = 3) -> LemmaReport:
    """kappa(n) <= 2^i + 3*2^j + 5 for n = a*2^j +- 1 in the middle range."""
    report = LemmaReport("8x-family")
    for n in middle_range(i):
        for dec in decompose(n, OFFSETS_8X, j_min):
            bound = (1 << i) + 3 * (1 << dec.j) + 5
            _bound_check(report, {"i": i, **dec.to_dict()}, n, bound)
    return report


def verify_32x_family(i: int) -> LemmaReport:
    """kappa(n) <= 2^i + 3*2^j + 28 for n = a*2^j + d, j >= 5."""
    report = LemmaReport("32x-family")
    for n in middle_range(i):
        for dec in decompose(n, OFFSETS_32X, 5):
            bound = (1 << i) + 3 * (1 << dec.j) + 28
            _bound_check(report, {"i": i, **dec.to_dict()}, n, bound)
    return report


def verify_2i_plus_d(i: int) -> LemmaReport:
    """kappa(2^i + d) <= 2^i + 5 for d in {1, 3, 5, 11, 13}."""
    report = LemmaReport("2i-plus-d")
    for d in (1, 3, 5, 11, 13):
        n = (1 << i) + d
        _bound_check(report, {"i": i, "n": n, "d": d}, n, (1 << i) + 5)
    return report


@dataclass(frozen=True)
class ConditionSearchTrace:
    n: int
    i: int
    k: int
    j: int
    found_c: Optional[int]
    p: Optional[int]
    conditions: Tuple[bool, bool, bool]
    blocks_match: Optional[bool] = None

    def __post_init__(self):
        if self.found_c is not None and not all(self.conditions):
            raise ValueError("a found c must satisfy all three conditions")

    def to_dict(self) -> dict:
        return {
            "n": self.n, "i": self.i, "k": self.k, "j": self.j,
            "found_c": self.found_c, "p": self.p,
            "conditions": list(self.conditions), "blocks_match": self.blocks_match,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConditionSearchTrace":
        return cls(data["n"], data["i"], data["k"], data["j"], data["found_c"], data["p"],
                   tuple(data["conditions"]), data.get("blocks_match"))


def allowed_p(dec: FamilyDecomposition) -> List[int]:
    """p in {1, 2} with: phi(d) ~ d + phi(d)  iff  a + p ~ p."""
    phi = PHI[dec.d]
    same = tm_equiv(phi, dec.d + phi)
    return [p for p in (1, 2) if tm_equiv(dec.a + p, p) == same]


def find_c_conditions(n: int, i: int, dec: Optional[FamilyDecomposition] = None) -> ConditionSearchTrace:
    """Search c <= 2^(i-1) + 6 meeting the three floor conditions.

    With F(c) = floor(n c / 2^(i-1)): (1) F(c+1) - F(c) == 2,
    (2) F(c) == phi(d) mod 32, (3) p 2^j < F(c) < (p+1) 2^j for an allowed p.
    """
    if dec is None:
        decs = decompose(n, OFFSETS_CLOSE, 5)
        if not decs:
            raise InfeasibleParametersError(f"{n} has no decomposition a*2^j+d with j >= 5")
        dec = max(decs, key=lambda x: x.j)
    shift = i - 1
    c = np.arange(1, (1 << shift) + 7, dtype=np.int64)
    f = (c * n) >> shift
    f_next = ((c + 1) * n) >> shift
    cond1 = (f_next - f) == 2
    cond2 = (f % 32) == PHI[dec.d] % 32
    ps = allowed_p(dec)
    cond3 = np.zeros(c.size, dtype=bool)
    p_of = np.zeros(c.size, dtype=np.int64)
    for p in ps:
        inside = (f > (p << dec.j)) & (f < ((p + 1) << dec.j))
        p_of[inside & ~cond3] = p
        cond3 |= inside
    all3 = cond1 & cond2 & cond3
    hits = np.flatnonzero(all3)
    if hits.size == 0:
        return ConditionSearchTrace(n, i, i - dec.j, dec.j, None, None,
                                    (bool(cond1.any()), bool(cond2.any()), bool(cond3.any())))
    idx = int(hits[0])
    found = int(c[idx])
    match = tm_blocks_equal_shift(ShiftCriterionQuery(n, found, shift))
    return ConditionSearchTrace(n, i, i - dec.j, dec.j, found, int(p_of[idx]),
                                (True, True, True), match)


def close_to_high_feasible(i: int, k_shift: int) -> bool:
    return 4 * (i - k_shift) >= 3 * i + 11


def verify_close_to_high(i: int, k_shift: int = 2) -> LemmaReport:
    """kappa(n) <= 2^i + 7 for n = a*2^j + d, j = i - k_shift >= (3i + 11)/4."""
    if k_shift < 2:
        raise ValueError("k_shift must be at least 2")
    j = i - k_shift
    if not close_to_high_feasible(i, k_shift):
        raise InfeasibleParametersError(
            f"j = {j} is below (3i+11)/4 = {Fraction(3 * i + 11, 4)} at i = {i}")
    report = LemmaReport("close-to-high")
    report.notes.append("internal_inequality records whether j >= 3k+11 also holds")
    lo, hi = 1 << i, 3 << (i - 1)
    for d in OFFSETS_CLOSE:
        a_min = max((lo - d) >> j, 1)
        for a in range(a_min | 1, ((hi - d) >> j) + 2, 2):
            n = (a << j) + d
            if not lo < n < hi:
                continue
            dec = FamilyDecomposition(n, a, j, d, i)
            trace = find_c_conditions(n, i, dec)
            _bound_check(report, {"i": i, "k": k_shift, **dec.to_dict()}, n, lo + 7,
                         trace=trace.to_dict(),
                         internal_inequality=j >= 3 * k_shift + 11)
    return report


def _exact_family(family: str, i: int) -> Tuple[int, int, Tuple[int, ...]]:
    """(n, claimed kappa, ordinal differences the proof's matching blocks have)."""
    if family == "2^i+1":
        return (1 << i) + 1, (1 << (i - 1)) + 2, (1 << (i - 1),)
    if family == "2^i+3":
        return (1 << i) + 3, (1 << i) + 5, (1 << i, 1 << (i - 1))
    if family == "2^2i-3":
        return (1 << 2 * i) - 3, (1 << 2 * i) + 10, (1 << 2 * i, 1 << (2 * i - 1))
    raise ValueError(f"unknown family {family!r}; choose from {EXACT_FAMILIES}")


def verify_exact_families(i_values: Iterable[int],
                          families: Sequence[str] = EXACT_FAMILIES) -> LemmaReport:
    report = LemmaReport("exact-families")
    if "2^i+1" in families:
        report.notes.append("the closing line of the 2^i+1 argument names 2^i-1; "
                            "the header statement for 2^i+1 is what is checked")
    for i in i_values:
        for family in families:
            n, claimed, diffs = _exact_family(family, i)
            params = {"family": family, "i": i, "n": n, "claimed": claimed}
            try:
                rec = kappa(n, cap=2 * claimed + 16)
            except CapExceededError as exc:
                report.add(params, False, {"n": n, "kappa_exceeds": exc.cap})
                continue
            ok = rec.kappa == claimed
            diff = rec.witness[1] - rec.witness[0]
            report.add(params, ok, None if ok else rec.to_dict(),
                       kappa=rec.kappa, witness=list(rec.witness),
                       witness_matches_proof=diff in diffs)
    return report


def window_17_6(i: int) -> range:
    """Odd positive n with 17/6 * 2^i - 96 < n < 17/6 * 2^i."""
    top = 17 << i  # compare 6n against this
    lo = max((top - 576) // 6 + 1, 1)
    hi = (top - 1) // 6
    lo |= 1
    return range(lo, hi + 1, 2)


def verify_window_17_6(i: int) -> LemmaReport:
    """Some odd n in the window has kappa(n) <= 2^i + 6."""
    report = LemmaReport("window-17-6")
    window = window_17_6(i)
    bound = (1 << i) + 6
    witnesses = []
    for n in window:
        rec = kappa_at_most(n, bound)
        if rec is not None:
            witnesses.append(rec)
    params = {"i": i}
    if not witnesses:
        report.add(params, False, {"window": [window.start, window.stop - 2] if window else [],
                                   "bound": bound},
                   empty_window=len(window) == 0, candidates=len(window))
        return report
    report.add(params, True, None, empty_window=False, candidates=len(window),
               bound=bound, witness_n=witnesses[0].n,
               witnesses=[r.to_dict() for r in witnesses],
               any_1_mod_32=any(r.n % 32 == 1 for r in witnesses))
    return report


def doubling_construction(m: int) -> np.ndarray:
    """A_m = A_{m-1} followed by its complement, starting from A_0 = 0."""
    word = np.zeros(1, dtype=np.uint8)
    for _ in range(m):
        word = np.concatenate([word, 1 - word])
    return word


def verify_digit_sum_prop(max_exp: int = 21) -> LemmaReport:
    """Digit-sum parity agrees with the doubling construction on [0, 2^m) for m <= max_exp."""
    report = LemmaReport("digit-sum")
    word = doubling_construction(max_exp)
    parity = parity_array(0, 1 << max_exp)
    mismatch = np.flatnonzero(word != parity)
    for m in range(max_exp + 1):
        bad = mismatch[mismatch < (1 << m)]
        report.add({"m": m}, bad.size == 0,
                   None if bad.size == 0 else {"n": int(bad[0])})
    return report


LEMMA_IDS = ("digit-tables", "digit-sum", "8x-family", "32x-family", "2i-plus-d",
             "close-to-high", "exact-families", "window-17-6")
