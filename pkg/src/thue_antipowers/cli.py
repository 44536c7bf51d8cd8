"""Command-line front end.

Exit status: 0 success, 1 a verification found a counterexample,
2 usage error, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from fractions import Fraction
from functools import partial
from typing import List, Sequence

from . import asymptotics as asy
from . import lemma_verify as lv
from .antipower import prefix_verdict, tm_prefix_is_antipower
from .errors import InfeasibleParametersError, ResourceLimitError
from .extremal import extremal
from .kappa import kappa
from .tm_core import generalized_letter, tm_equiv, tm_prefix

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def parse_range(text: str) -> List[int]:
    """'5..8' -> [5, 6, 7, 8]; '5,7' -> [5, 7]; '6' -> [6]."""
    out: List[int] = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("text", "csv", "json"), default=default("text"))
    parser.add_argument("--jobs", type=int, default=default(1),
                        help="worker processes (output is identical for any value)")
    parser.add_argument("--out", default=default(None), help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thue-antipowers",
        description="Antipower structure of prefixes of the Thue-Morse word.")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        _global_flags(p, suppress=True)
        return p

    p = add("letter", "letter t_N (or the base-B generalization)")
    p.add_argument("n", type=int)
    p.add_argument("--base", type=int, default=2)

    p = add("prefix", "first LEN letters")
    p.add_argument("length", type=int)

    p = add("equiv", "whether t_N == t_M")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)

    p = add("check", "is the length-nk prefix a k-antipower")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("kappa", "least k whose length-kN prefix is not a k-antipower")
    p.add_argument("n", type=int)
    p.add_argument("--cap", type=int, default=None)

    p = add("extremal", "gamma(K), Gamma(K) and the complement of F(K)")
    p.add_argument("k", type=int)

    p = add("sweep-kappa", "kappa(n) for every odd n in [LO, HI]")
    p.add_argument("lo", type=int)
    p.add_argument("hi", type=int)

    p = add("sweep-extremal", "gamma and Gamma for every k in [LO, HI]")
    p.add_argument("lo", type=int)
    p.add_argument("hi", type=int)
    p.add_argument("--dyadic", action="store_true",
                   help="emit min/max ratios per dyadic block of k instead of per-k rows")

    p = add("verify", "finite-range check of one lemma")
    p.add_argument("lemma", choices=lv.LEMMA_IDS)
    p.add_argument("--i", type=parse_range, default=None, help="exponents, e.g. 5..8 or 5,7")
    p.add_argument("--k-shift", type=int, default=2)
    p.add_argument("--family", action="append", choices=lv.EXACT_FAMILIES, default=None)
    p.add_argument("--max-exp", type=int, default=21)

    p = add("conjecture", "scan the window above 3*2^I against kappa(3*2^I+1)")
    p.add_argument("i", type=int)
    p.add_argument("--margin", type=parse_fraction, default=Fraction(0))

    return parser


@contextmanager
def _mapper(jobs: int):
    if jobs <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield partial(pool.map, chunksize=16)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _single_csv(row: dict) -> str:
    return asy.to_csv([row], list(row))


def _records_csv(report: lv.LemmaReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lemma_id", "params", "verdict", "counterexample"])
    for r in report.records:
        w.writerow([report.lemma_id, json.dumps(r.params), "PASS" if r.verdict else "FAIL",
                    json.dumps(r.counterexample) if r.counterexample else ""])
    return buf.getvalue()


DEFAULT_I = {
    "8x-family": [8, 9, 10, 11],
    "32x-family": [8, 9, 10, 11],
    "2i-plus-d": list(range(5, 17)),
    "close-to-high": [19],
    "exact-families": [5, 6, 7, 8],
    "window-17-6": list(range(10, 15)),
}


def run_verify(args, mapper) -> lv.LemmaReport:
    lemma = args.lemma
    if lemma == "digit-tables":
        return lv.verify_digit_tables()
    if lemma == "digit-sum":
        return lv.verify_digit_sum_prop(args.max_exp)
    i_values = args.i or DEFAULT_I[lemma]
    if lemma == "exact-families":
        families = tuple(args.family) if args.family else lv.EXACT_FAMILIES
        fn = partial(_exact_one, families=families)
    elif lemma == "close-to-high":
        fn = partial(lv.verify_close_to_high, k_shift=args.k_shift)
    else:
        fn = {
            "8x-family": lv.verify_8x_family,
            "32x-family": lv.verify_32x_family,
            "2i-plus-d": lv.verify_2i_plus_d,
            "window-17-6": lv.verify_window_17_6,
        }[lemma]
    return lv.merge_reports(list(mapper(fn, i_values)))


def _exact_one(i: int, families: Sequence[str]) -> lv.LemmaReport:
    return lv.verify_exact_families([i], families)


def execute(args) -> tuple[str, int]:
    fmt = args.format
    cmd = args.command
    status = EXIT_OK

    if cmd == "letter":
        value = generalized_letter(args.base, args.n)
        row = {"n": args.n, "base": args.base, "letter": value}
        text = f"{value}\n"
    elif cmd == "prefix":
        word = str(tm_prefix(args.length))
        row = {"length": args.length, "word": word}
        text = word + "\n"
    elif cmd == "equiv":
        eq = tm_equiv(args.n, args.m)
        row = {"n": args.n, "m": args.m, "equivalent": eq}
        text = f"{str(eq).lower()}\n"
    elif cmd == "check":
        verdict = (tm_prefix_is_antipower(args.n, args.k) if args.n % 2
                   else prefix_verdict(args.n, args.k))
        w = verdict.witness
        row = {"n": args.n, "k": args.k, "is_antipower": verdict.is_antipower,
               "witness_c": w[0] if w else None, "witness_cprime": w[1] if w else None}
        if fmt == "json":
            return _dump_json({"n": args.n, "k": args.k, **verdict.to_dict()}), status
        text = (f"n={args.n} k={args.k} antipower={str(verdict.is_antipower).lower()}"
                + (f" witness={w[0]},{w[1]}" if w else "") + "\n")
    elif cmd == "kappa":
        rec = kappa(args.n, args.cap)
        if fmt == "json":
            return _dump_json(rec.to_dict()), status
        if fmt == "csv":
            return asy.to_csv(asy.kappa_rows([asy.RatioSample(rec.n, rec.kappa, rec.witness)]),
                              asy.KAPPA_CSV_FIELDS), status
        return f"n={rec.n} kappa={rec.kappa} witness={rec.witness[0]},{rec.witness[1]}\n", status
    elif cmd == "extremal":
        rec = extremal(args.k)
        if fmt == "json":
            return _dump_json(rec.to_dict()), status
        row = {"k": rec.k, "gamma": rec.gamma, "Gamma": rec.Gamma,
               "complement": " ".join(map(str, rec.complement)), "cap_used": rec.cap_used}
        text = (f"k={rec.k} gamma={rec.gamma} "
                f"Gamma={'absent' if rec.Gamma is None else rec.Gamma} cap={rec.cap_used}\n"
                f"complement: {' '.join(map(str, rec.complement)) or '(empty)'}\n")
    elif cmd in ("sweep-kappa", "sweep-extremal", "verify", "conjecture"):
        with _mapper(args.jobs) as mapper:
            return _execute_parallel(args, mapper)
    else:  # argparse guarantees a known command
        raise AssertionError(cmd)

    if fmt == "json":
        return _dump_json(row), status
    if fmt == "csv":
        return _single_csv({k: ("" if v is None else v) for k, v in row.items()}), status
    return text, status


def _execute_parallel(args, mapper) -> tuple[str, int]:
    fmt = args.format
    cmd = args.command
    if cmd == "sweep-kappa":
        lo, hi = args.lo | 1, args.hi - (1 - args.hi % 2)
        samples = asy.sweep_kappa(lo, hi, mapper) if lo <= hi else []
        if fmt == "json":
            return _dump_json([s.to_dict() for s in samples]), EXIT_OK
        rows = asy.kappa_rows(samples)
        if fmt == "csv":
            return asy.to_csv(rows, asy.KAPPA_CSV_FIELDS), EXIT_OK
        lines = [f"{'n':>8} {'kappa':>8} {'witness':>17} {'kappa/n':>10}"]
        lines += [f"{r['n']:>8} {r['kappa']:>8} {r['witness_c']:>8},{r['witness_cprime']:<8} "
                  f"{r['ratio']:>10}" for r in rows]
        return "\n".join(lines) + "\n", EXIT_OK

    if cmd == "sweep-extremal":
        samples = asy.sweep_extremal(args.lo, args.hi, mapper)
        summary = asy.dyadic_summary(samples)
        if fmt == "json":
            return _dump_json({
                "samples": [s.to_dict() for s in samples],
                "dyadic": asy.dyadic_rows(summary),
            }), EXIT_OK
        if fmt == "csv":
            if args.dyadic:
                return asy.to_csv(asy.dyadic_rows(summary), asy.DYADIC_CSV_FIELDS), EXIT_OK
            return asy.to_csv(asy.extremal_rows(samples), asy.EXTREMAL_CSV_FIELDS), EXIT_OK
        lines = []
        if not args.dyadic:
            lines.append(f"{'k':>7} {'gamma':>7} {'Gamma':>7} {'gamma/k':>9} {'Gamma/k':>9} {'gap/k':>9}")
            for r in asy.extremal_rows(samples):
                lines.append(f"{r['index']:>7} {r['value_gamma']:>7} "
                             f"{'-' if r['value_Gamma'] is None else r['value_Gamma']:>7} "
                             f"{r['ratio_gamma']:>9} {r['ratio_Gamma'] or '-':>9} {r['ratio_gap'] or '-':>9}")
        for r in asy.dyadic_rows(summary):
            lines.append(f"[2^{r['i']}] k={r['k_first']}..{r['k_last']} "
                         f"gamma/k in [{r['gamma_min_dec']}, {r['gamma_max_dec']}] "
                         f"Gamma/k in [{r['Gamma_min_dec'] or '-'}, {r['Gamma_max_dec'] or '-'}] "
                         f"gap/k in [{r['gap_min_dec'] or '-'}, {r['gap_max_dec'] or '-'}]")
        return "\n".join(lines) + "\n", EXIT_OK

    if cmd == "conjecture":
        rec = asy.conjecture_scan(args.i, args.margin, mapper)
        d = rec.to_dict()
        if fmt == "json":
            return _dump_json(d), EXIT_OK
        if fmt == "csv":
            d = dict(d, violations=" ".join(map(str, d["violations"])))
            return _single_csv({k: ("" if v is None else v) for k, v in d.items()}), EXIT_OK
        if rec.empty_window:
            return f"i={rec.i} margin={d['margin']}: empty window\n", EXIT_OK
        return (f"i={rec.i} margin={d['margin']} reference={rec.reference} "
                f"window={rec.window_first}..{rec.window_last} ({rec.window_size} odd n)\n"
                f"violations ({d['violation_fraction']}): "
                f"{' '.join(map(str, rec.violations)) or 'none'}\n"), EXIT_OK

    report = run_verify(args, mapper)
    status = EXIT_OK if report.passed else EXIT_FAIL
    if fmt == "json":
        return _dump_json(report.to_dict()), status
    if fmt == "csv":
        return _records_csv(report), status
    passed = sum(report.verdicts)
    summary = (f"{report.lemma_id}: {passed}/{len(report.records)} passed"
               + ("" if report.passed else f", {len(report.records) - passed} FAILED"))
    threshold = lv.holding_threshold(report) if report.records and "i" in report.records[0].params else None
    if threshold is not None:
        summary += f"; holds for every tested i >= {threshold}"
    return report.to_text() + "\n" + summary + "\n", status


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        output, status = execute(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InfeasibleParametersError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
