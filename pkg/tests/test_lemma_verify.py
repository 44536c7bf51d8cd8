import pytest

from thue_antipowers.antipower import BlockRef, tm_blocks_equal_direct
from thue_antipowers.errors import InfeasibleParametersError
from thue_antipowers.kappa import kappa
from thue_antipowers.lemma_verify import (
    PHI,
    PSI,
    ConditionSearchTrace,
    FamilyDecomposition,
    LemmaReport,
    allowed_p,
    decompose,
    find_c_conditions,
    holding_threshold,
    verify_2i_plus_d,
    verify_32x_family,
    verify_8x_family,
    verify_close_to_high,
    verify_digit_sum_prop,
    verify_digit_tables,
    verify_exact_families,
    verify_window_17_6,
    window_17_6,
)
from thue_antipowers.tm_core import tm_equiv, tm_letter


def test_phi_table_entries():
    assert PHI[5] == 10 and PHI[13] == 2 and PHI[-11] == 26 and PHI[-3] == 18
    assert set(PHI) == {1, -1, 3, -3, 5, -5, 11, -11, 13, -13}
    assert PSI == {1: 2, 5: 3, 11: 0, 13: 3}


def test_digit_table_examples():
    assert tm_equiv(15, 10)  # d = 5, s = 0
    assert not tm_equiv(15, 2)  # d = 13, s = 0
    assert tm_equiv(2, 2**10 + 3)  # psi path, d = 1


def test_digit_tables_pass():
    report = verify_digit_tables()
    assert report.passed
    phi_rows = [p for p in report.parameter_grid if p["table"] == "phi"]
    assert len(phi_rows) == 30  # every d, every s


def test_digit_sum_prop():
    report = verify_digit_sum_prop(20)
    assert report.passed and len(report.records) == 21
    assert tm_letter(6) == 0 and tm_letter(0) == 0 and tm_letter(2**15) == 1


def test_decompose():
    assert decompose(135, (1, -1), 3) == [FamilyDecomposition(135, 17, 3, -1)]
    assert decompose(145, (1, -1), 3) == [FamilyDecomposition(145, 9, 4, 1)]
    assert decompose(129, (1, -1), 3) == [FamilyDecomposition(129, 1, 7, 1)]
    assert decompose(515, (3,), 5) == [FamilyDecomposition(515, 1, 9, 3)]
    # 269 = 2^8 + 13 belongs to the 32x family; 271 has no admissible offset
    assert decompose(269, (3, -3, 5, -5, 11, -11, 13, -13), 5) == [FamilyDecomposition(269, 1, 8, 13)]
    assert decompose(271, (3, -3, 5, -5, 11, -11, 13, -13), 5) == []


def test_8x_family_examples():
    report = verify_8x_family(7)
    by_n = {p["n"]: r for p, r in zip(report.parameter_grid, report.records)}
    assert by_n[129].detail["bound"] == 128 + 3 * 128 + 5
    assert by_n[145].detail["bound"] == 128 + 48 + 5
    assert 135 in by_n
    assert report.passed


def test_32x_family_examples():
    r8 = verify_32x_family(8)
    assert 261 in [p["n"] for p in r8.parameter_grid]
    assert 269 in [p["n"] for p in r8.parameter_grid]
    assert 271 not in [p["n"] for p in r8.parameter_grid]
    r9 = verify_32x_family(9)
    assert {"i": 9, "n": 515, "a": 1, "j": 9, "d": 3} in r9.parameter_grid


@pytest.mark.parametrize("i", range(5, 12))
def test_bound_families_hold(i):
    # every tested i >= 5 passes; smaller i is outside "sufficiently large"
    assert verify_8x_family(i).passed
    assert verify_32x_family(i).passed
    assert verify_2i_plus_d(i).passed


def test_2i_plus_d_fails_below_threshold():
    report = verify_2i_plus_d(4)
    assert not report.passed
    for cex in report.counterexamples:
        assert cex["kappa"] > 2**4 + 5
        assert kappa(cex["n"]).kappa == cex["kappa"]


def test_thresholds_recorded():
    merged = verify_2i_plus_d(3).extend(verify_2i_plus_d(4)).extend(verify_2i_plus_d(5))
    assert holding_threshold(merged) == 5


def test_close_to_high_infeasible():
    with pytest.raises(InfeasibleParametersError):
        verify_close_to_high(10, 2)


def test_close_to_high_i19():
    report = verify_close_to_high(19, 2)
    assert report.passed and len(report.records) == 10
    for rec in report.records:
        trace = ConditionSearchTrace.from_dict(rec.detail["trace"])
        assert trace.found_c is not None and trace.found_c <= 2**18 + 6
        assert trace.blocks_match
        n, c = rec.params["n"], trace.found_c
        assert tm_blocks_equal_direct(BlockRef(n, c + 1), BlockRef(n, c + 1 + 2**18))
        assert rec.detail["internal_inequality"]


def test_find_c_conditions_direct():
    n = 5 * 2**19 + 3
    trace = find_c_conditions(n, 21)
    assert trace.j == 19 and trace.k == 2 and trace.found_c is not None
    f = lambda c: (n * c) >> 20
    c = trace.found_c
    assert f(c + 1) - f(c) == 2
    assert f(c) % 32 == PHI[3]
    assert trace.p * 2**19 < f(c) < (trace.p + 1) * 2**19


def test_condition_one_rejects_gap_three():
    # at i = 21 with n = 5 * 2^19 + 3, some c has floor gap 3; none of those is chosen
    n, shift = 5 * 2**19 + 3, 20
    trace = find_c_conditions(n, 21)
    c = trace.found_c
    assert ((c + 1) * n >> shift) - (c * n >> shift) == 2


def test_allowed_p():
    dec = FamilyDecomposition(5 * 2**19 + 3, 5, 19, 3)
    # phi(3) ~ 3 + phi(3), so p must satisfy 5 + p ~ p
    assert allowed_p(dec) == [p for p in (1, 2) if tm_equiv(5 + p, p)]


def test_trace_invariant():
    with pytest.raises(ValueError):
        ConditionSearchTrace(1, 1, 1, 1, 5, 1, (True, False, True))


@pytest.mark.parametrize("family, i, value", [("2^i+1", 5, 18), ("2^i+3", 5, 37), ("2^2i-3", 3, 74)])
def test_exact_family_instances(family, i, value):
    report = verify_exact_families([i], [family])
    assert report.passed
    assert report.records[0].detail["kappa"] == value
    assert report.records[0].detail["witness_matches_proof"]


def test_exact_family_notes_discrepancy():
    report = verify_exact_families([5])
    assert any("2^i-1" in note for note in report.notes)


def test_window_bounds():
    w = window_17_6(12)
    assert all(17 * 4096 - 576 < 6 * n < 17 * 4096 for n in w)
    # 17/6 * 4096 = 11605.33..., minus 96 = 11509.33...
    assert w[0] == 11511 and w[-1] == 11605 and len(w) == 48


def test_window_lemma_i12():
    report = verify_window_17_6(12)
    assert report.passed
    detail = report.records[0].detail
    assert kappa(detail["witness_n"]).kappa <= 2**12 + 6
    assert detail["any_1_mod_32"]


def test_window_small_i_reports():
    report = verify_window_17_6(3)
    assert len(report.records) == 1


def test_report_serialization():
    report = verify_2i_plus_d(4)
    assert LemmaReport.from_dict(report.to_dict()).to_dict() == report.to_dict()
    lines = report.to_text().splitlines()
    assert len(lines) == len(report.records)
    assert all(len(line.split("\t")) == 4 for line in lines)


def test_reports_reproducible():
    assert verify_32x_family(9).to_dict() == verify_32x_family(9).to_dict()
