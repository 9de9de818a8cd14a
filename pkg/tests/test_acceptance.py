"""Acceptance checks. Run with ``pytest tests/test_acceptance.py -s`` to see
one PASS/FAIL line per criterion."""

import sys
import time

from hypothesis import given, settings
from hypothesis import strategies as st

from bvinvert.catalog import seed_catalog
from bvinvert.cli import main
from bvinvert.coresuite import run_core_suites
from bvinvert.syntax import (
    parse_atom,
    parse_catalog,
    parse_cond,
    parse_term,
    print_atom,
    print_catalog,
    print_cond,
    print_term,
)
from bvinvert.terms import TRUE
from bvinvert.verify import Status, VerifyConfig, mutate_ic, verify_exhaustive, verify_sampled

from strategies import conds, terms
from test_verify import oracle_set

SEED = seed_catalog()


def verdict_line(n, ok, detail, start):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - start:.1f}s) {detail}"
    print(f"\n{line}", file=sys.stderr if not ok else sys.stdout)
    assert ok, line


def test_criterion_1_seeds_valid_exhaustive():
    start = time.perf_counter()
    bad = [(e.name, w, v.status.value) for e in SEED for w in range(1, 9)
           if (v := verify_exhaustive(e, w)).status is not Status.VALID]
    verdict_line(1, not bad, f"5 entries x widths 1..8 valid; failures={bad}", start)


def test_criterion_2_sampled_large_widths():
    start = time.perf_counter()
    cfg = VerifyConfig(samples_per_width=100_000)
    problems = []
    for e in SEED:
        for w in (16, 32, 65):
            v = verify_sampled(e, w, cfg)
            if v.status is Status.COUNTEREXAMPLE:
                problems.append((e.name, w, "forward counterexample"))
            if e.name in ("add-eq", "shl-ugt"):
                st_ = v.stats
                if st_.ic_true_pairs == 0 or st_.witnesses_via_hint != st_.ic_true_pairs:
                    problems.append((e.name, w, f"hints {st_.witnesses_via_hint}/{st_.ic_true_pairs}"))
    verdict_line(2, not problems, f"widths 16,32,65 at 1e5 samples; problems={problems}", start)


def _suites(names, random_widths):
    return run_core_suites(max_exhaustive_width=10, random_widths=random_widths,
                           random_cases=100_000, only=names)


def _suite_detail(results):
    return "; ".join(f"{r.name}={'ok' if r.passed else r.failure}" for r in results)


def test_criterion_3_dual_definitions():
    start = time.perf_counter()
    names = ["shl-dual-definitions", "shr-dual-definitions", "ashr-dual-definitions"]
    rs = _suites(names, (64, 65, 128))
    verdict_line(3, len(rs) == 3 and all(r.passed for r in rs), _suite_detail(rs), start)


def test_criterion_4_lemmas():
    start = time.perf_counter()
    rs = _suites(["ones-is-unsigned-max", "shl-bounded-by-shifted-ones"], (65,))
    verdict_line(4, len(rs) == 2 and all(r.passed for r in rs), _suite_detail(rs), start)


def test_criterion_5_ule_lex():
    start = time.perf_counter()
    rs = _suites(["ule-lex-vs-integer"], (65,))
    verdict_line(5, len(rs) == 1 and rs[0].passed, _suite_detail(rs), start)


def _canonical(name, w):
    # Smallest (s, t) in row-major order that is not invertible.
    inv = oracle_set(name, w)
    n = 2**w
    return next(((s, t) for s in range(n) for t in range(n) if (s, t) not in inv), None)


def test_criterion_6_mutation_falsified():
    start = time.perf_counter()
    found = {}
    problems = []
    for e in SEED:
        if e.ic == TRUE:
            continue
        weak = mutate_ic(e, TRUE)
        for w in (1, 2):
            v = verify_exhaustive(weak, w)
            if v.status is Status.COUNTEREXAMPLE:
                c = v.counterexample
                got = (c.s.value, c.t.value)
                found[e.name] = (w, c.s.to_smtlib(), c.t.to_smtlib())
                if got != _canonical(e.name, w):
                    problems.append((e.name, w, got))
                break
        else:
            problems.append((e.name, "no counterexample at width <= 2"))
    and_w1 = verify_exhaustive(mutate_ic(SEED["and-eq"], TRUE), 1).counterexample
    ok = not problems and len(found) == 4 and (and_w1.s.value, and_w1.t.value) == (0, 1)
    verdict_line(6, ok, f"{found}; problems={problems}", start)


def test_criterion_7_determinism(tmp_path):
    start = time.perf_counter()
    outs = []
    for workers in (1, 3):
        p = tmp_path / f"w{workers}.json"
        code = main(["verify", "--widths", "1-8", "--sampled-widths", "16,32,65",
                     "--seed", "7", "--workers", str(workers), "--format", "json", "--out", str(p)])
        assert code == 0
        outs.append(p.read_bytes())
    verdict_line(7, outs[0] == outs[1], f"{len(outs[0])} bytes, workers 1 vs 3", start)


def test_criterion_8_parser_round_trip():
    start = time.perf_counter()
    count = {"terms": 0, "conds": 0}
    failures = []

    @given(st.one_of(terms().map(lambda e: ("terms", e)), conds().map(lambda c: ("conds", c))))
    @settings(max_examples=10_000, deadline=None, database=None)
    def check(kv):
        kind, v = kv
        count[kind] += 1
        back = parse_term(print_term(v)) if kind == "terms" else parse_cond(print_cond(v))
        if back != v:
            failures.append(v)
        assert back == v

    check()
    seeds_ok = all(parse_atom(print_atom(e.literal)) == e.literal and parse_cond(print_cond(e.ic)) == e.ic
                   for e in SEED)
    seeds_ok = seeds_ok and parse_catalog(print_catalog(list(SEED))) == list(SEED)
    total = sum(count.values())
    verdict_line(8, total >= 10_000 and not failures and seeds_ok,
                 f"{total} random IR values ({count}); seeds re-parse={seeds_ok}", start)


def test_criterion_9_crosscheck_stub(tmp_path, capsys):
    start = time.perf_counter()
    stub = tmp_path / "stub.py"
    argv = ["crosscheck", "--solver", sys.executable, "--solver-arg", str(stub),
            "--widths", "1-4", "--out", str(tmp_path / "bench")]
    stub.write_text("print('unsat')\n")
    agree_code = main(argv)
    out = capsys.readouterr().out
    agreed = out.count("| yes |")
    stub.write_text("print('sat')\n")
    disagree_code = main(argv)
    capsys.readouterr()
    ok = agree_code == 0 and agreed == 20 and disagree_code != 0
    verdict_line(9, ok, f"unsat stub exit={agree_code} agreeing={agreed}/20; sat stub exit={disagree_code}", start)
