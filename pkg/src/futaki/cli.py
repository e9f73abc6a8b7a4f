"""Command-line front end: ``futaki check | scan | verify``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .bundle import (
    BundleError,
    CheckInput,
    DestabilizerSpec,
    InadmissiblePolarization,
    MalformedInput,
    load_input,
)
from .exactnum import Q, parse_rational
from .relative import Sign
from .report import check, render_json, render_scan, render_text, report_ok, scan_rows
from .verify import SUITES, Corpus, run_all

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INADMISSIBLE = 2
EXIT_MALFORMED = 3

_SIGN_ORDER = {Sign.NEGATIVE.value: 0, Sign.ZERO.value: 1, Sign.POSITIVE.value: 2}


def _rational(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _load(path: str) -> CheckInput:
    try:
        return load_input(path)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror or exc}") from exc


def _enumerate(ci: CheckInput, d_min: int, d_max: int, order: int) -> dict:
    target = ci.bundle.summands[ci.destabilizer.target_index]
    rows = []
    for r_L in range(1, target.rank):
        for d_L in range(d_min, d_max + 1):
            dest = DestabilizerSpec(ci.destabilizer.target_index, r_L, d_L)
            try:
                rep = check(replace(ci, destabilizer=dest), order)
            except InadmissiblePolarization:
                rows.append({"rank": r_L, "degree": d_L, "skipped": "inadmissible"})
                continue
            rows.append({"rank": r_L, "degree": d_L, "value": rep["value"], "sign": rep["sign"], "ok": report_ok(rep)})
    scored = [r for r in rows if "sign" in r]
    minimal = None
    if scored:
        minimal = min(scored, key=lambda r: (_SIGN_ORDER[r["sign"]], Q(r["value"])))
    return {"rows": rows, "minimal": minimal}


def cmd_check(args) -> int:
    ci = _load(args.input)
    if args.enumerate:
        if args.d_min > args.d_max:
            raise MalformedInput("--d-min exceeds --d-max")
        out = _enumerate(ci, args.d_min, args.d_max, args.expansion_order)
        if args.emit == "json":
            sys.stdout.write(json.dumps(out, indent=2) + "\n")
        else:
            for r in out["rows"]:
                tail = "skipped: inadmissible" if "skipped" in r else f"{r['value']}\t{r['sign']}"
                sys.stdout.write(f"r_L={r['rank']}\td_L={r['degree']}\t{tail}\n")
            if out["minimal"]:
                m = out["minimal"]
                sys.stdout.write(f"minimal: r_L={m['rank']} d_L={m['degree']} sign={m['sign']}\n")
        return EXIT_OK if all(r.get("ok", True) for r in out["rows"]) else EXIT_FAIL
    report = check(ci, args.expansion_order)
    sys.stdout.write(render_json(report) if args.emit == "json" else render_text(report))
    return EXIT_OK if report_ok(report) else EXIT_FAIL


def cmd_scan(args) -> int:
    if args.step <= 0:
        raise MalformedInput("--step must be positive")
    if args.c_min > args.c_max:
        raise MalformedInput("empty scan range")
    ci = _load(args.input)
    values = []
    c = args.c_min
    while c <= args.c_max:
        values.append(c)
        c = c + args.step
    rows = scan_rows(ci, values)
    if args.emit == "json":
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    else:
        sys.stdout.write(render_scan(rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = args.suite or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise MalformedInput(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    corpus = Corpus(max_rank=args.max_rank, max_degree=args.max_degree, genera=tuple(args.genus))
    ok = True
    for res in run_all(corpus, names):
        print(res.line(), flush=True)
        ok = ok and res.passed
    print("all suites passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="futaki", description="Exact relative Futaki invariants of bundle degenerations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate one test configuration")
    p.add_argument("--input", required=True, help="input JSON file")
    p.add_argument("--expansion-order", type=int, default=5)
    p.add_argument("--emit", choices=("json", "text"), default="json")
    p.add_argument("--enumerate", action="store_true", help="try every sub-bundle rank with degrees in [d-min, d-max]")
    p.add_argument("--d-min", type=int, default=-3)
    p.add_argument("--d-max", type=int, default=3)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", help="tabulate the invariant over a range of polarizations")
    p.add_argument("--input", required=True)
    p.add_argument("--c-min", type=_rational, required=True)
    p.add_argument("--c-max", type=_rational, required=True)
    p.add_argument("--step", type=_rational, required=True)
    p.add_argument("--emit", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run the exact identity suites")
    p.add_argument("--suite", action="append", help=f"one of: {', '.join(SUITES)} (repeatable)")
    p.add_argument("--max-rank", type=int, default=5)
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--genus", type=int, nargs="+", default=[1, 2])
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InadmissiblePolarization as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except (MalformedInput, BundleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
