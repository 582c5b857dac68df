"""Command-line front end: every shipped example as a reproducible run.

Subcommands: search, multisearch, margin, factor, dataset.  Human-readable
summaries go to stderr; the machine-readable payload (CSV by default, JSON
with ``--emit json``) goes to ``--out`` or standard output.  Exit codes are a
stable contract: 0 success, 2 input/validation, 3 verification, 4 retry
budget exhausted.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

from . import dataset as ds
from . import periodfind as pf
from .errors import (
    ExhaustedAttempts,
    NotCoprime,
    OddPeriod,
    TrivialCase,
    VerificationFailed,
    WaveOracleError,
)
from .oracle import (
    OracleSpec,
    PhaseAlphabet,
    example1_oracle,
    example2_oracle,
    oracle_from_json,
    random_oracle,
)
from .search import (
    binary_superposition_search,
    brute_force,
    margin_sweep,
    segment_search,
    write_margin_csv,
    write_trace_csv,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFICATION = 3
EXIT_EXHAUSTED = 4


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _fmt_pi(x: float) -> str:
    return f"{x / math.pi:.6g}"


def _fmt_phases(phases) -> str:
    return ", ".join(_fmt_pi(p) for p in phases)


def _payload_out(args, render_csv, render_json) -> None:
    if args.emit == "json":
        text = json.dumps(render_json(), indent=2) + "\n"
    else:
        buf = io.StringIO()
        render_csv(buf)
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def _trace_json(result) -> list[dict]:
    rows = []
    for step in result.trace:
        for rec in step.queries:
            rows.append({
                "step": step.step,
                "label": step.label,
                "phases": list(rec.phases),
                "a_out": rec.a_out,
                "p_out": rec.p_out,
                "decision": step.decision,
            })
    return rows


def _resolve_oracle(args, kind: str) -> OracleSpec:
    if args.preset:
        return example1_oracle() if kind == "binary" else example2_oracle()
    if args.oracle:
        return oracle_from_json(Path(args.oracle).read_text(encoding="utf-8"))
    if kind == "binary":
        return random_oracle(args.n, "binary", seed=args.random_seed)
    return random_oracle(args.n, "multivalued",
                         alphabet=PhaseAlphabet.uniform(args.m),
                         seed=args.random_seed)


def _summarize_search(result) -> None:
    _say(f"solution [pi]: {_fmt_phases(result.solution)}")
    _say("solution [rad]: " + ", ".join(repr(p) for p in result.solution))
    _say(f"queries: {result.queries}")
    _say(f"verified: {'true' if result.verified else 'false'}")
    if len(result.ties) > 1:
        for tie in result.ties:
            _say(f"co-maximum [pi]: {_fmt_phases(tie)}")


def _check_against_brute_force(oracle_factory, result) -> None:
    # Fresh oracle so the exhaustive check does not disturb query accounting.
    # Every answer the search reported must be a true global argmax; with
    # several global maxima the search is entitled to surface a subset (ties
    # hiding in strictly weaker segments are not visited).
    reference = brute_force(oracle_factory())
    expect = set(reference.ties)
    got = set(result.ties) if result.ties else {result.solution}
    if not got <= expect:
        raise VerificationFailed(
            f"search answer {sorted(got - expect)} is not an exhaustive "
            f"argmax {sorted(expect)}")
    _say(f"brute-force check: ok ({reference.queries} combinations)")


def cmd_search(args) -> int:
    make = lambda: _resolve_oracle(args, "binary")
    result = binary_superposition_search(make(), tolerance=args.tolerance,
                                         protocol=args.protocol)
    _summarize_search(result)
    if args.check_brute_force:
        _check_against_brute_force(make, result)
    _payload_out(args, lambda buf: write_trace_csv(result, buf),
                 lambda: {"solution": list(result.solution),
                          "queries": result.queries,
                          "verified": result.verified,
                          "trace": _trace_json(result)})
    return EXIT_OK


def cmd_multisearch(args) -> int:
    make = lambda: _resolve_oracle(args, "multivalued")
    result = segment_search(make(), tie_tolerance=args.tolerance)
    _summarize_search(result)
    if args.check_brute_force:
        _check_against_brute_force(make, result)
    if not result.verified:
        raise VerificationFailed("best combination did not trip the detector")
    _payload_out(args, lambda buf: write_trace_csv(result, buf),
                 lambda: {"solution": list(result.solution),
                          "ties": [list(t) for t in result.ties],
                          "queries": result.queries,
                          "verified": result.verified,
                          "trace": _trace_json(result)})
    return EXIT_OK


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    a = int(lo)
    b = int(hi) if sep else a
    return a, b


def cmd_margin(args) -> int:
    try:
        lo, hi = _parse_range(args.n)
    except ValueError as exc:
        raise ValueError(f"bad range {args.n!r}: {exc}") from exc
    if not 2 <= lo <= hi <= 10 ** 4:
        raise ValueError(f"need 2 <= n_min <= n_max <= 10^4, got {lo}..{hi}")
    rows = margin_sweep(lo, hi)
    _say(f"worst-case margins for n = {lo}..{hi}")
    _say(f"margin at n={hi}: {rows[-1][1]:.6e}")
    _payload_out(args, lambda buf: write_margin_csv(rows, buf),
                 lambda: {"rows": [{"n": n, "margin": m} for n, m in rows]})
    return EXIT_OK


def cmd_factor(args) -> int:
    n = args.n
    if n < 4:
        raise ValueError(f"need N >= 4, got {n}")
    if args.base is not None:
        seq = (pf.mod_sequence(n, args.base, args.k) if args.k
               else pf.auto_sequence(n, args.base))
        period = pf.find_period(seq, tol=args.tolerance)
        factors: tuple[int, ...] = ()
        note = ""
        try:
            factors = pf.factor_step(n, args.base, period.period)
        except (OddPeriod, TrivialCase) as exc:
            note = str(exc)
        _say(f"base: {args.base}")
        _say(f"period: {period.period}")
        _say(f"converged phase [pi]: {_fmt_pi(period.converged_phase)}")
        _say(f"converged phase [rad]: {period.converged_phase!r}")
        _say("factors: " + (", ".join(str(f) for f in factors) if factors
                            else f"none ({note})"))
        chosen = seq
        summary = {"n": n, "base": args.base, "period": period.period,
                   "converged_phase": period.converged_phase,
                   "factors": list(factors)}
    else:
        result = pf.factorize(n, seed=args.seed, max_attempts=args.attempts,
                              tol=args.tolerance)
        win = result.attempts[-1]
        _say(f"factor: {result.factor}")
        _say(f"base: {win.base} ({win.outcome})")
        if result.period_result is not None:
            _say(f"period: {result.period_result.period}")
            _say("converged phase [pi]: "
                 f"{_fmt_pi(result.period_result.converged_phase)}")
        chosen = (pf.auto_sequence(n, win.base) if win.period is not None
                  else None)
        summary = {"n": n, "factor": result.factor, "base": win.base,
                   "outcome": win.outcome,
                   "period": win.period,
                   "attempts": [{"base": a.base, "outcome": a.outcome,
                                 "period": a.period,
                                 "factors": list(a.factors)}
                                for a in result.attempts]}

    def render_csv(buf) -> None:
        if chosen is not None:
            pf.write_phase_trace_csv(chosen, buf)
        else:
            buf.write(",".join(pf.PHASE_TRACE_COLUMNS) + "\n")

    _payload_out(args, render_csv, lambda: summary)
    return EXIT_OK


DATASET_COLUMNS = ("record", "phases_deg", "voltage_mV", "value")


def cmd_dataset(args) -> int:
    if args.preset:
        segment = ds.example3_segment_table()
        leaves = ds.example3_leaf_table()
    else:
        segment, leaves = ds.split_combined(ds.load_table(args.csv))
    report = ds.segment_search_tabulated(segment, leaves,
                                         tie_tolerance_mv=args.tie_tolerance)
    for combo, mv in report.winning_segments:
        _say(f"segment winner: ({', '.join(ds._fmt_deg(c) for c in combo)}) "
             f"at {mv} mV")
    for combo, mv in report.candidates:
        _say(f"candidate: ({', '.join(ds._fmt_deg(c) for c in combo)}) "
             f"at {mv} mV")
    _say(f"queries: {report.total_queries} vs exhaustive "
         f"{report.exhaustive_space}")

    def render_csv(buf) -> None:
        import csv as _csv
        w = _csv.writer(buf, lineterminator="\n")
        w.writerow(DATASET_COLUMNS)
        for combo, mv in report.winning_segments:
            w.writerow(["segment_winner",
                        ";".join(ds._fmt_deg(c) for c in combo), repr(mv), ""])
        for combo, mv in report.candidates:
            w.writerow(["candidate",
                        ";".join(ds._fmt_deg(c) for c in combo), repr(mv), ""])
        w.writerow(["queries_superposition", "", "", report.total_queries])
        w.writerow(["queries_exhaustive_baseline", "", "",
                    report.exhaustive_space])

    _payload_out(args, render_csv,
                 lambda: {
                     "winning_segments": [
                         {"phases_deg": list(c), "voltage_mV": v}
                         for c, v in report.winning_segments],
                     "candidates": [
                         {"phases_deg": list(c), "voltage_mV": v}
                         for c, v in report.candidates],
                     "queries_superposition": report.total_queries,
                     "queries_exhaustive_baseline": report.exhaustive_space,
                 })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waveoracle",
        description="Wave-superposition oracle searches, margins, period "
                    "finding, and tabulated-dataset runs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, default_emit="csv"):
        p.add_argument("--out", help="write the machine-readable payload here "
                                     "(default: standard output)")
        p.add_argument("--emit", choices=("csv", "json"), default=default_emit)

    p = sub.add_parser("search", help="bit-by-bit superposition search on a "
                                      "binary oracle")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=("example1",))
    src.add_argument("--oracle", help="oracle JSON document path")
    src.add_argument("--random-seed", type=int, dest="random_seed")
    p.add_argument("--n", type=int, default=8,
                   help="input count for --random-seed oracles")
    p.add_argument("--protocol", choices=("direct", "detector"),
                   default="direct")
    p.add_argument("--check-brute-force", action="store_true")
    p.add_argument("--tolerance", type=float, default=1e-9)
    add_common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("multisearch", help="segment-subdivision search on a "
                                           "multivalued oracle")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=("example2",))
    src.add_argument("--oracle", help="oracle JSON document path")
    src.add_argument("--random-seed", type=int, dest="random_seed")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=8,
                   help="alphabet size for --random-seed oracles (power of 2)")
    p.add_argument("--check-brute-force", action="store_true")
    p.add_argument("--tolerance", type=float, default=1e-9)
    add_common(p)
    p.set_defaults(func=cmd_multisearch)

    p = sub.add_parser("margin", help="worst-case decision margins over a "
                                      "range of input counts")
    p.add_argument("--n", required=True,
                   help="input-count range, e.g. 2..100 or a single value")
    add_common(p)
    p.set_defaults(func=cmd_margin)

    p = sub.add_parser("factor", help="wave-phase period finding and the gcd "
                                      "factor step")
    p.add_argument("--n", type=int, required=True, help="number to factor")
    p.add_argument("--base", type=int)
    p.add_argument("--k", type=int, help="sequence length (default: four "
                                         "full periods)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempts", type=int, default=32)
    p.add_argument("--tolerance", type=float, default=1e-6)
    add_common(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("dataset", help="segment search over measured voltage "
                                       "tables")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=("example3-fixture",))
    src.add_argument("--csv", help="combined table CSV (midpoint rows plus "
                                   "lattice rows)")
    p.add_argument("--tie-tolerance", type=float,
                   default=ds.DEFAULT_TIE_TOLERANCE_MV)
    add_common(p)
    p.set_defaults(func=cmd_dataset)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailed as exc:
        _say(f"verification failed: {exc}")
        return EXIT_VERIFICATION
    except ExhaustedAttempts as exc:
        _say(f"exhausted: {exc}")
        return EXIT_EXHAUSTED
    except NotCoprime as exc:
        # Lucky case in a factor flow: the gcd itself is a factor.
        _say(f"not coprime: {exc}; gcd {exc.common} is a factor")
        return EXIT_OK if getattr(args, "command", "") == "factor" else EXIT_INPUT
    except (WaveOracleError, ValueError, OSError, KeyError) as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT


def entrypoint() -> None:  # console-script shim
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
