"""Command-line interface.

Exit codes: 0 success, 1 a check failed (unexpected counterexample, failing
core suite, solver disagreement), 2 bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .catalog import Catalog, CatalogError, read_catalog_file, seed_catalog
from .coresuite import run_core_suites
from .report import FORMATS, build_report
from .smtlib import SolverRunConfig, crosscheck, emit_smtlib, write_benchmarks
from .syntax import ParseError, print_atom, print_cond, print_term
from .verify import Status, VerifyConfig, WidthTooLarge, verify_campaign


class UsageError(Exception):
    pass


def parse_widths(text: str) -> tuple[int, ...]:
    """Parse ``"1-8"``, ``"16,32,65"``, ``"1-4,9"`` or ``"none"``."""
    text = text.strip()
    if text in ("", "none"):
        return ()
    out: list[int] = []
    try:
        for part in text.split(","):
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad width list {text!r}") from None
    if any(w < 1 for w in out):
        raise argparse.ArgumentTypeError("widths must be positive")
    return tuple(sorted(set(out)))


def load_catalog(paths: Sequence[str], with_seed: bool) -> Catalog:
    entries = list(seed_catalog()) if with_seed or not paths else []
    for p in paths:
        try:
            entries.extend(read_catalog_file(p))
        except ParseError as exc:
            raise UsageError(f"{p}:{exc}") from None
        except OSError as exc:
            raise UsageError(f"{p}: {exc.strerror}") from None
    try:
        return Catalog(entries)
    except CatalogError as exc:
        raise UsageError(str(exc)) from None


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _catalog_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--catalog", action="append", default=[], metavar="PATH",
                   help="catalog file (repeatable); the seed catalog is used when none is given")
    p.add_argument("--with-seed", action="store_true",
                   help="include the seed catalog alongside --catalog files")


def cmd_verify(args) -> int:
    catalog = load_catalog(args.catalog, args.with_seed)
    try:
        config = VerifyConfig(
            exhaustive_widths=args.widths,
            sampled_widths=args.sampled_widths,
            samples_per_width=args.samples,
            witness_budget=args.witness_budget,
            rng_seed=args.seed,
            workers=args.workers,
        )
    except (ValueError, WidthTooLarge) as exc:
        raise UsageError(str(exc)) from None
    verdicts = verify_campaign(catalog, config)
    report = build_report(verdicts, config, timings=args.timings)
    _write(FORMATS[args.format](report), args.out)
    failing = [
        v for v in verdicts
        if v.status is Status.COUNTEREXAMPLE and not catalog[v.entry].expect_counterexample
    ]
    for v in failing:
        c = v.counterexample
        print(f"counterexample: {v.entry} width {v.width}: s={c.s} t={c.t}"
              + (f" x={c.x}" if c.x is not None else ""), file=sys.stderr)
    return 1 if failing else 0


def cmd_check_core(args) -> int:
    results = run_core_suites(
        max_exhaustive_width=args.max_width,
        random_widths=args.random_widths,
        random_cases=args.cases,
        seed=args.seed,
    )
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        line = f"{mark} {r.name} ({r.cases} cases)"
        if not r.passed:
            line += ": " + r.detail
        print(line)
    return 0 if all(r.passed for r in results) else 1


def _select(catalog: Catalog, names: Sequence[str]):
    if not names:
        return list(catalog)
    missing = [n for n in names if n not in catalog]
    if missing:
        raise UsageError(f"unknown entry: {', '.join(missing)}")
    return [catalog[n] for n in names]


def cmd_emit_smt(args) -> int:
    catalog = load_catalog(args.catalog, args.with_seed)
    entries = _select(catalog, args.entry)
    if args.out:
        for p in write_benchmarks(entries, args.widths, args.out):
            print(p)
    else:
        for e in entries:
            for w in args.widths:
                sys.stdout.write(emit_smtlib(e, w))
    return 0


def cmd_crosscheck(args) -> int:
    catalog = load_catalog(args.catalog, args.with_seed)
    cfg = SolverRunConfig(args.solver, tuple(args.solver_arg), args.timeout)
    try:
        rows = crosscheck(list(catalog), args.widths, cfg, args.out, workers=args.workers)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    bad = False
    print("| entry | width | solver | exhaustive | agree |")
    print("|---|---|---|---|---|")
    for r in rows:
        verdict = r.verdict.value if r.verdict is not None else "-"
        agree = {True: "yes", False: "**DISAGREE**", None: "-"}[r.agree]
        print(f"| {r.entry} | {r.width} | {r.answer} | {verdict} | {agree} |")
        bad |= r.agree is False
    return 1 if bad else 0


def cmd_list_catalog(args) -> int:
    catalog = load_catalog(args.catalog, args.with_seed)
    for e in catalog:
        print(e.name)
        print(f"  literal    {print_atom(e.literal)}")
        print(f"  ic         {print_cond(e.ic)}")
        if e.witness_hints:
            print(f"  hints      {' '.join(print_term(h) for h in e.witness_hints)}")
        if e.provenance:
            print(f"  provenance {e.provenance}")
        if e.expect_counterexample:
            print("  expects a counterexample")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bvinvert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check catalog entries at fixed widths")
    _catalog_args(p)
    p.add_argument("--widths", type=parse_widths, default=tuple(range(1, 9)),
                   help="exhaustive widths, e.g. 1-8 (default 1-8)")
    p.add_argument("--sampled-widths", type=parse_widths, default=(16, 32, 65),
                   help="sampled widths, or 'none' (default 16,32,65)")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--witness-budget", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=sorted(FORMATS), default="md")
    p.add_argument("--timings", action="store_true", help="include elapsed times in the report")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-core", help="run the bit-vector core law suites")
    p.add_argument("--max-width", type=int, default=8, help="largest exhaustive width (default 8)")
    p.add_argument("--random-widths", type=parse_widths, default=(64, 65, 128))
    p.add_argument("--cases", type=int, default=100_000, help="random cases per random width")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check_core)

    p = sub.add_parser("emit-smt", help="write SMT-LIB 2 benchmarks")
    _catalog_args(p)
    p.add_argument("--entry", action="append", default=[], help="entry name (repeatable)")
    p.add_argument("--widths", type=parse_widths, default=tuple(range(1, 9)))
    p.add_argument("--out", help="directory for <entry>_w<width>.smt2 files; stdout if omitted")
    p.set_defaults(func=cmd_emit_smt)

    p = sub.add_parser("crosscheck", help="compare an external solver with exhaustive verdicts")
    _catalog_args(p)
    p.add_argument("--widths", type=parse_widths, default=tuple(range(1, 5)))
    p.add_argument("--solver", required=True, help="solver executable")
    p.add_argument("--solver-arg", action="append", default=[], help="extra solver argument (repeatable)")
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="benchmarks", help="benchmark directory (default ./benchmarks)")
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("list-catalog", help="print catalog entries")
    _catalog_args(p)
    p.set_defaults(func=cmd_list_catalog)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
