"""Property suites over the bit-vector core.

Each suite checks one law exhaustively for small widths and on random
operands for large widths.  ``ops`` lets callers substitute any bitvec
function by name, which is how tests inject faults.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional

from . import bitvec
from .bitvec import BitVec
from .verify import draw_value


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    cases: int
    failure: Optional[tuple[BitVec, ...]] = None
    detail: str = ""


class _Ops:
    def __init__(self, overrides: Mapping[str, Callable]):
        self._overrides = dict(overrides)

    def __getattr__(self, name):
        if name in self._overrides:
            return self._overrides[name]
        return getattr(bitvec, name)


def _exhaustive(width: int, arity: int) -> Iterator[tuple[BitVec, ...]]:
    vals = list(bitvec.all_vectors(width))
    return itertools.product(vals, repeat=arity)


def _random(width: int, arity: int, count: int, rng: random.Random) -> Iterator[tuple[BitVec, ...]]:
    for _ in range(count):
        yield tuple(BitVec(draw_value(rng, width), width) for _ in range(arity))


def _check(name: str, cases: Iterable[tuple[BitVec, ...]], prop, describe) -> SuiteResult:
    n = 0
    for args in cases:
        n += 1
        if not prop(*args):
            return SuiteResult(name, False, n, args, describe(*args))
    return SuiteResult(name, True, n)


def _dual(op: _Ops, iter_name: str, splice_name: str):
    f, g = getattr(op, iter_name), getattr(op, splice_name)

    def prop(a, b):
        return f(a, b) == g(a, b)

    def describe(a, b):
        return f"{iter_name}({a}, {b}) = {f(a, b)} but {splice_name} gives {g(a, b)}"

    return prop, describe


def _suites(op: _Ops):
    """(name, arity, property, describe) for every core law."""
    out = []
    for kind in ("shl", "shr", "ashr"):
        prop, describe = _dual(op, f"bv_{kind}_iter", f"bv_{kind}_splice")
        out.append((f"{kind}-dual-definitions", 2, prop, describe))

    out.append((
        "ule-lex-vs-integer",
        2,
        lambda a, b: op.ule_lex(a, b) == (a.value <= b.value),
        lambda a, b: f"ule_lex({a}, {b}) = {op.ule_lex(a, b)}",
    ))
    out.append((
        "ones-is-unsigned-max",
        1,
        lambda x: op.bv_ule(x, op.ones(x.width)),
        lambda x: f"{x} is not <=u all-ones",
    ))

    def shl_mono(x, s):
        return op.bv_ule(op.bv_shl(x, s), op.bv_shl(op.ones(x.width), s))

    out.append((
        "shl-bounded-by-shifted-ones",
        2,
        shl_mono,
        lambda x, s: f"({x} << {s}) is not <=u (ones << {s})",
    ))

    def order_laws(a, b, c):
        if op.bv_ugt(a, b) != op.bv_ult(b, a):
            return False
        if op.bv_ult(a, b) and op.bv_ule(b, c) and not op.bv_ult(a, c):
            return False
        return op.bv_eq(a, b) == (op.bv_ule(a, b) and op.bv_ule(b, a))

    out.append(("order-laws", 3, order_laws, lambda a, b, c: f"order law fails on {a}, {b}, {c}"))

    def arith(a, b):
        w, m = a.width, (1 << a.width) - 1
        k = min(b.value, w)
        return (
            op.bv_add(a, b).value == (a.value + b.value) & m
            and op.bv_sub(a, b).value == (a.value - b.value) & m
            and op.bv_neg(a).value == -a.value & m
            and op.bv_mul(a, b).value == (a.value * b.value) & m
            and op.bv_shl(a, b).value == (a.value << k) & m
            and op.bv_lshr(a, b).value == a.value >> k
            and op.bv_ashr(a, b).value == (op.to_signed(a) >> k) & m
            and op.bv_slt(a, b) == (op.to_signed(a) < op.to_signed(b))
            and op.from_unsigned(op.to_unsigned(a), w) == a
        )

    out.append(("arithmetic-vs-integers", 2, arith, lambda a, b: f"arithmetic mismatch on {a}, {b}"))
    return out


# Exhaustive triples grow as 2**(3w); cap them below the pair limit.
MAX_TRIPLE_WIDTH = 6


def run_core_suites(
    max_exhaustive_width: int = 8,
    random_widths: Iterable[int] = (64, 65, 128),
    random_cases: int = 100_000,
    seed: int = 0,
    ops: Mapping[str, Callable] = {},
    only: Optional[Iterable[str]] = None,
) -> list[SuiteResult]:
    """Run each core law over widths ``1..max_exhaustive_width`` exhaustively,
    then on ``random_cases`` edge-biased random operands per random width."""
    op = _Ops(ops)
    results = []
    wanted = set(only) if only is not None else None
    for name, arity, prop, describe in _suites(op):
        if wanted is not None and name not in wanted:
            continue
        rng = random.Random(f"{seed}:{name}")
        total = 0
        failed = None
        exhaustive_cap = max_exhaustive_width if arity < 3 else min(max_exhaustive_width, MAX_TRIPLE_WIDTH)
        widths = [(w, True) for w in range(1, exhaustive_cap + 1)]
        widths += [(w, False) for w in range(exhaustive_cap + 1, max_exhaustive_width + 1)]
        widths += [(w, False) for w in random_widths]
        for w, full in widths:
            cases = _exhaustive(w, arity) if full else _random(w, arity, random_cases, rng)
            r = _check(name, cases, prop, describe)
            total += r.cases
            if not r.passed:
                failed = r
                break
        if failed is not None:
            results.append(SuiteResult(name, False, total, failed.failure, failed.detail))
        else:
            results.append(SuiteResult(name, True, total))
    return results


SUITE_NAMES = tuple(name for name, *_ in _suites(_Ops({})))
