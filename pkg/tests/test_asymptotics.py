from fractions import Fraction

import pytest

from thue_antipowers.asymptotics import (
    ConjectureScanRecord,
    ExtremalSample,
    KAPPA_CSV_FIELDS,
    RatioSample,
    conjecture_scan,
    conjecture_window,
    dyadic_summary,
    extremal_rows,
    format_ratio,
    kappa_rows,
    sweep_extremal,
    sweep_kappa,
    to_csv,
)
from thue_antipowers.extremal import extremal


def test_sweep_kappa_small():
    # values from the unpruned oracle
    assert [s.value for s in sweep_kappa(1, 9)] == [3, 3, 7, 7, 6]
    assert [s.value for s in sweep_kappa(33, 35)] == [18, 37]
    assert sweep_kappa(11, 9) == []


def test_sweep_kappa_requires_odd_bounds():
    with pytest.raises(ValueError):
        sweep_kappa(2, 9)


def test_ratio_exactness():
    for s in sweep_kappa(1, 301):
        assert s.ratio * s.index == s.value
        row = s.to_dict()
        assert Fraction(row["ratio_num"], row["ratio_den"]) * s.index == s.value
        assert RatioSample.from_dict(row) == s


def test_ratio_mismatch_rejected():
    bad = RatioSample(5, 7, (5, 7)).to_dict()
    bad["ratio_num"] = 8
    with pytest.raises(ValueError):
        RatioSample.from_dict(bad)


@pytest.mark.parametrize("fr, text", [
    (Fraction(7, 5), "1.400000"),
    (Fraction(2, 3), "0.666667"),
    (Fraction(1, 3), "0.333333"),
    (Fraction(1, 2_000_000), "0.000001"),  # half rounds up
    (Fraction(-1, 3), "-0.333333"),
])
def test_format_ratio(fr, text):
    assert format_ratio(fr) == text


def test_sweep_extremal_small():
    got = [(s.k, s.gamma, s.Gamma) for s in sweep_extremal(2, 12)]
    assert got[:2] == [(2, 1, None), (3, 5, 3)]
    assert got == [(k, extremal(k).gamma, extremal(k).Gamma) for k in range(2, 13)]


def test_sweep_extremal_agrees_with_per_k_path():
    samples = sweep_extremal(100, 400)
    for s in samples[::17]:
        rec = extremal(s.k)
        assert (s.gamma, s.Gamma, s.cap_used) == (rec.gamma, rec.Gamma, rec.cap_used)


def test_sweep_csv_is_stable():
    a = to_csv(extremal_rows(sweep_extremal(50, 90)), list(extremal_rows(sweep_extremal(1, 1))[0]))
    b = to_csv(extremal_rows(sweep_extremal(50, 90)), list(extremal_rows(sweep_extremal(1, 1))[0]))
    assert a == b
    rows = kappa_rows(sweep_kappa(1, 9))
    text = to_csv(rows, KAPPA_CSV_FIELDS)
    assert text.splitlines()[0] == ",".join(KAPPA_CSV_FIELDS)
    assert text.splitlines()[3] == "5,7,5,7,7,5,1.400000"


def test_extremal_sample_round_trip():
    for s in sweep_extremal(2, 30):
        assert ExtremalSample.from_dict(s.to_dict()) == s


def test_dyadic_summary_blocks():
    summary = dyadic_summary(sweep_extremal(30, 70))
    assert [e["i"] for e in summary] == [4, 5, 6]
    assert (summary[1]["k_first"], summary[1]["k_last"]) == (32, 63)
    for e in summary:
        assert e["gamma_min"] <= e["gamma_max"]


def test_conjecture_window():
    assert conjecture_window(6, Fraction(0)) == range(193, 256, 2)
    assert conjecture_window(6, Fraction(1, 16)) == range(193, 240, 2)
    assert len(conjecture_window(2, Fraction(3, 4))) == 0
    with pytest.raises(ValueError):
        conjecture_window(6, Fraction(1))


def test_conjecture_scan_values():
    rec = conjecture_scan(6, Fraction(0))
    assert rec.reference == 216
    assert rec.violations == (241, 251, 253)
    assert rec.violation_fraction == Fraction(3, 32)
    assert conjecture_scan(8, Fraction(1, 32)).violations == ()


def test_conjecture_scan_empty_window():
    rec = conjecture_scan(2, Fraction(3, 4))
    assert rec.empty_window and rec.violations == ()


def test_conjecture_record_round_trip():
    rec = conjecture_scan(6, Fraction(1, 16))
    assert ConjectureScanRecord.from_dict(rec.to_dict()) == rec
    with pytest.raises(ValueError):
        ConjectureScanRecord(6, Fraction(0), 216, 193, 255, 32, (300,))
