"""Checking ``ic[s,t] <=> exists x. literal[x,s,t]`` at fixed widths.

Two regimes:

* exhaustive: every (x, s, t) is enumerated, so the equivalence is decided
  exactly for that width;
* sampled: random falsification of the forward direction plus a budgeted
  witness search for the backward direction.  Sampling can refute but never
  confirm, so it never reports :attr:`Status.VALID`.
"""

from __future__ import annotations

import enum
import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from .bitvec import BitVec
from .catalog import Catalog, ICEntry
from .kernels import eval_cond_array, eval_term_array
from .terms import (
    ONES,
    S,
    T,
    ZERO,
    Assignment,
    Atom,
    BinOp,
    Binary,
    Cond,
    Term,
    UnOp,
    Unary,
    compile_cond,
    compile_term,
    eval_atom,
    eval_cond,
)

MAX_EXHAUSTIVE_WIDTH = 16

# Tried for x, in order, after the entry's own hints.
FALLBACK_CANDIDATES: tuple[Term, ...] = (
    ZERO,
    ONES,
    S,
    T,
    Unary(UnOp.NEG, S),
    Binary(BinOp.SUB, T, S),
    Binary(BinOp.ADD, T, S),
)


class Mode(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class Status(str, enum.Enum):
    VALID = "valid"
    COUNTEREXAMPLE = "counterexample"
    FORWARD_ONLY = "forward-only"
    INCONCLUSIVE = "inconclusive"


class WidthTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class VerifyConfig:
    exhaustive_widths: tuple[int, ...] = tuple(range(1, 9))
    sampled_widths: tuple[int, ...] = (16, 32, 65)
    samples_per_width: int = 100_000
    witness_budget: int = 4096
    rng_seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "exhaustive_widths", tuple(sorted(set(self.exhaustive_widths))))
        object.__setattr__(self, "sampled_widths", tuple(sorted(set(self.sampled_widths))))
        for w in self.exhaustive_widths + self.sampled_widths:
            if w < 1:
                raise ValueError(f"widths must be positive, got {w}")
        if self.exhaustive_widths and self.exhaustive_widths[-1] > MAX_EXHAUSTIVE_WIDTH:
            raise WidthTooLarge(
                f"exhaustive checking is limited to width {MAX_EXHAUSTIVE_WIDTH}"
            )
        if self.samples_per_width < 1 or self.witness_budget < 1 or self.workers < 1:
            raise ValueError("samples, witness budget and workers must all be at least 1")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng seed must fit in 64 bits")

    def plan(self) -> list[tuple[int, Mode]]:
        """Widths to check, ascending; exhaustive wins where both sets overlap."""
        modes = {w: Mode.SAMPLED for w in self.sampled_widths}
        modes.update({w: Mode.EXHAUSTIVE for w in self.exhaustive_widths})
        return sorted(modes.items())


@dataclass(frozen=True)
class Counterexample:
    """A pair on which the two sides of the equivalence disagree.

    ``direction`` is ``"forward"`` when some x satisfies the literal but the
    condition is false (``x`` is then the smallest such witness), and
    ``"backward"`` when the condition holds but no x satisfies the literal.
    """

    s: BitVec
    t: BitVec
    x: Optional[BitVec]
    direction: str


@dataclass
class VerifyStats:
    pairs_checked: int = 0
    literal_evaluations: int = 0
    ic_true_pairs: int = 0
    witnesses_via_hint: int = 0
    witnesses_via_candidate: int = 0
    witnesses_via_search: int = 0
    elapsed: float = 0.0

    def merge(self, other: VerifyStats) -> VerifyStats:
        return VerifyStats(
            *(getattr(self, f) + getattr(other, f) for f in self.__dataclass_fields__)
        )


@dataclass(frozen=True)
class Verdict:
    entry: str
    width: int
    mode: Mode
    status: Status
    counterexample: Optional[Counterexample] = None
    unwitnessed: Optional[tuple[BitVec, BitVec]] = None
    stats: VerifyStats = field(default_factory=VerifyStats)

    def __post_init__(self):
        if self.status is Status.VALID and self.mode is not Mode.EXHAUSTIVE:
            raise ValueError("only exhaustive checking can establish validity")
        if (self.status is Status.COUNTEREXAMPLE) != (self.counterexample is not None):
            raise ValueError("a counterexample is required exactly for COUNTEREXAMPLE verdicts")


class InvertibilitySet:
    """Set of (s, t) pairs at one width, stored as a flat bitmap indexed ``s * 2**w + t``."""

    def __init__(self, width: int, members: np.ndarray):
        n = 1 << width
        members = np.asarray(members, dtype=bool).reshape(-1)
        if members.shape != (n * n,):
            raise ValueError("bitmap size must be 2**(2*width)")
        self.width = width
        self.members = members

    def __contains__(self, pair) -> bool:
        s, t = (v.value if isinstance(v, BitVec) else v for v in pair)
        return bool(self.members[(s << self.width) | t])

    def __len__(self) -> int:
        return int(self.members.sum())

    def __eq__(self, other):
        if not isinstance(other, InvertibilitySet):
            return NotImplemented
        return self.width == other.width and np.array_equal(self.members, other.members)

    def pairs(self) -> set[tuple[int, int]]:
        idx = np.flatnonzero(self.members)
        mask = (1 << self.width) - 1
        return {(int(i) >> self.width, int(i) & mask) for i in idx}

    def __repr__(self):
        return f"InvertibilitySet(width={self.width}, size={len(self)})"


def _check_exhaustive_width(width: int) -> None:
    if width < 1:
        raise ValueError("width must be positive")
    if width > MAX_EXHAUSTIVE_WIDTH:
        raise WidthTooLarge(f"width {width} exceeds exhaustive limit {MAX_EXHAUSTIVE_WIDTH}")


def _t_chunk(n: int) -> int:
    return max(1, min(n, (1 << 20) // n))


def _scan_s(literal: Atom, width: int, s: int) -> tuple[np.ndarray, np.ndarray]:
    """For a fixed ``s``: which t admit a witness, and the smallest witness (or -1)."""
    n = 1 << width
    xs = np.arange(n, dtype=np.uint64)[:, None]
    sv = np.uint64(s)
    inv = np.empty(n, dtype=bool)
    wit = np.full(n, -1, dtype=np.int64)
    step = _t_chunk(n)
    for lo in range(0, n, step):
        ts = np.arange(lo, min(n, lo + step), dtype=np.uint64)[None, :]
        grid = np.broadcast_to(
            eval_cond_array(literal, width, {"x": xs, "s": sv, "t": ts}), (n, ts.shape[1])
        )
        hit = grid.any(axis=0)
        inv[lo : lo + ts.shape[1]] = hit
        wit[lo : lo + ts.shape[1]] = np.where(hit, grid.argmax(axis=0), -1)
    return inv, wit


def exact_invertibility_set(
    literal: Atom, width: int, method: str = "array", short_circuit: bool = True
) -> InvertibilitySet:
    """All (s, t) for which some x satisfies ``literal``.

    ``method="scalar"`` walks x in ascending order with the reference
    evaluator; ``method="array"`` evaluates whole grids with numpy.
    ``short_circuit`` only affects the scalar walk.
    """
    _check_exhaustive_width(width)
    n = 1 << width
    if method == "array":
        rows = [_scan_s(literal, width, s)[0] for s in range(n)]
        return InvertibilitySet(width, np.concatenate(rows))
    if method != "scalar":
        raise ValueError(f"unknown method {method!r}")
    members = np.zeros(n * n, dtype=bool)
    vals = [BitVec(v, width) for v in range(n)]
    for s in vals:
        for t in vals:
            found = False
            for x in vals:
                if eval_atom(literal, Assignment(width, x=x, s=s, t=t)):
                    found = True
                    if short_circuit:
                        break
            members[(s.value << width) | t.value] = found
    return InvertibilitySet(width, members)


def ic_truth_set(ic: Cond, width: int, method: str = "array") -> InvertibilitySet:
    _check_exhaustive_width(width)
    n = 1 << width
    if method == "scalar":
        vals = [BitVec(v, width) for v in range(n)]
        members = [eval_cond(ic, Assignment(width, s=s, t=t)) for s in vals for t in vals]
        return InvertibilitySet(width, np.array(members, dtype=bool))
    ss = np.arange(n, dtype=np.uint64)[:, None]
    ts = np.arange(n, dtype=np.uint64)[None, :]
    grid = np.broadcast_to(eval_cond_array(ic, width, {"s": ss, "t": ts}), (n, n))
    return InvertibilitySet(width, grid)


@dataclass
class _SliceResult:
    first: Optional[Counterexample]
    stats: VerifyStats


def _exhaustive_slice(entry: ICEntry, width: int, s_lo: int, s_hi: int) -> _SliceResult:
    n = 1 << width
    stats = VerifyStats()
    ts = np.arange(n, dtype=np.uint64)
    for s in range(s_lo, s_hi):
        sv = np.uint64(s)
        inv, wit = _scan_s(entry.literal, width, s)
        ic = np.broadcast_to(eval_cond_array(entry.ic, width, {"s": sv, "t": ts}), (n,))
        stats.pairs_checked += n
        stats.literal_evaluations += n * n
        stats.ic_true_pairs += int(ic.sum())
        if entry.witness_hints:
            covered = np.zeros(n, dtype=bool)
            for h in entry.witness_hints:
                hx = np.broadcast_to(eval_term_array(h, width, {"s": sv, "t": ts}), (n,))
                ok = eval_cond_array(entry.literal, width, {"x": hx, "s": sv, "t": ts})
                covered |= np.broadcast_to(ok, (n,))
            stats.witnesses_via_hint += int((covered & ic).sum())
        diff = np.flatnonzero(inv != ic)
        if diff.size:
            t = int(diff[0])
            if inv[t]:
                cex = Counterexample(BitVec(s, width), BitVec(t, width),
                                     BitVec(int(wit[t]), width), "forward")
            else:
                cex = Counterexample(BitVec(s, width), BitVec(t, width), None, "backward")
            return _SliceResult(cex, stats)
    return _SliceResult(None, stats)


def _strata(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    bounds = [n * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


def _merge_slices(entry: ICEntry, width: int, results: Sequence[_SliceResult], elapsed: float) -> Verdict:
    stats = VerifyStats()
    first = None
    # Slices are in ascending s order, so the first mismatch found is the
    # smallest (s, t).  Slices after it are ignored, which makes the stats
    # equal to those of a single sequential scan.
    for r in results:
        stats = stats.merge(r.stats)
        if r.first is not None:
            first = r.first
            break
    stats.elapsed = elapsed
    if first is None:
        return Verdict(entry.name, width, Mode.EXHAUSTIVE, Status.VALID, stats=stats)
    return Verdict(entry.name, width, Mode.EXHAUSTIVE, Status.COUNTEREXAMPLE, first, stats=stats)


def verify_exhaustive(entry: ICEntry, width: int) -> Verdict:
    """Decide the equivalence for ``entry`` at ``width`` by full enumeration.

    On failure the verdict carries the smallest disagreeing (s, t), ordered
    by s then t as unsigned values.
    """
    _check_exhaustive_width(width)
    start = time.perf_counter()
    r = _exhaustive_slice(entry, width, 0, 1 << width)
    return _merge_slices(entry, width, [r], time.perf_counter() - start)


def task_seed(seed: int, entry_name: str, width: int) -> int:
    """Per-task RNG seed, independent of scheduling and worker count."""
    digest = hashlib.sha256(f"{seed}:{entry_name}:{width}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def draw_value(rng: random.Random, width: int) -> int:
    """Draw a ``width``-bit value: half uniform, half from edge-value families.

    Uniform draws almost never produce small shift amounts, zero, or
    all-ones-adjacent values at wide widths, yet those are where most
    conditions change truth value.
    """
    r = rng.random()
    if r < 0.5:
        return rng.getrandbits(width)
    mask = (1 << width) - 1
    small = rng.randrange(min(1 << width, width + 2))
    if r < 0.625:
        return small
    if r < 0.75:
        return mask - small
    if r < 0.875:
        return ((1 << rng.randrange(width)) + rng.choice((-1, 0, 1))) & mask
    k = rng.randrange(width + 1)
    return (mask << k) & mask if rng.random() < 0.5 else mask >> k


def verify_sampled(entry: ICEntry, width: int, config: VerifyConfig = VerifyConfig()) -> Verdict:
    """Probe the equivalence at ``width`` by random sampling.

    Values come from :func:`draw_value`.  Each round draws (x, s, t) for the
    forward direction: the literal holding
    while the condition fails is a counterexample.  It then draws (s, t) for
    the backward direction.  When the condition holds there, a witness x is
    sought among the hints, the fallback candidates and ``witness_budget``
    random values.  When it does not hold, hints and candidates are still
    tried since any hit refutes the forward direction.

    Once one pair goes unwitnessed the verdict is FORWARD_ONLY and the random
    search is skipped for the remaining rounds.
    """
    start = time.perf_counter()
    rng = random.Random(task_seed(config.rng_seed, entry.name, width))

    def draw(w):
        return draw_value(rng, w)

    lit = compile_cond(entry.literal, width)
    ic = compile_cond(entry.ic, width)
    hints = [compile_term(h, width) for h in entry.witness_hints]
    cands = [compile_term(c, width) for c in FALLBACK_CANDIDATES]
    stats = VerifyStats()
    unwitnessed: Optional[tuple[int, int]] = None

    def done(status, cex=None):
        stats.elapsed = time.perf_counter() - start
        uw = None
        if unwitnessed is not None:
            uw = (BitVec(unwitnessed[0], width), BitVec(unwitnessed[1], width))
        return Verdict(entry.name, width, Mode.SAMPLED, status, cex, uw, stats)

    def forward_cex(x, s, t):
        return Counterexample(BitVec(s, width), BitVec(t, width), BitVec(x, width), "forward")

    for _ in range(config.samples_per_width):
        x, s, t = draw(width), draw(width), draw(width)
        stats.literal_evaluations += 1
        if lit(x, s, t) and not ic(0, s, t):
            return done(Status.COUNTEREXAMPLE, forward_cex(x, s, t))

        s, t = draw(width), draw(width)
        stats.pairs_checked += 1
        if not ic(0, s, t):
            for f in hints + cands:
                x = f(0, s, t)
                stats.literal_evaluations += 1
                if lit(x, s, t):
                    return done(Status.COUNTEREXAMPLE, forward_cex(x, s, t))
            continue

        stats.ic_true_pairs += 1
        found = False
        for f in hints:
            stats.literal_evaluations += 1
            if lit(f(0, s, t), s, t):
                stats.witnesses_via_hint += 1
                found = True
                break
        if not found:
            for f in cands:
                stats.literal_evaluations += 1
                if lit(f(0, s, t), s, t):
                    stats.witnesses_via_candidate += 1
                    found = True
                    break
        if not found and unwitnessed is None:
            for _ in range(config.witness_budget):
                stats.literal_evaluations += 1
                if lit(draw(width), s, t):
                    stats.witnesses_via_search += 1
                    found = True
                    break
            if not found:
                unwitnessed = (s, t)

    if unwitnessed is not None:
        return done(Status.FORWARD_ONLY)
    return done(Status.INCONCLUSIVE)


# Campaigns.


def _run_task(task):
    kind, entry, width, arg = task
    if kind == "slice":
        start = time.perf_counter()
        r = _exhaustive_slice(entry, width, *arg)
        r.stats.elapsed = time.perf_counter() - start
        return r
    return verify_sampled(entry, width, arg)


def verify_campaign(catalog: Iterable[ICEntry], config: VerifyConfig = VerifyConfig()) -> list[Verdict]:
    """Run every entry at every configured width.

    Work is spread over ``config.workers`` processes; exhaustive widths are
    additionally split into s-strata.  The verdict list is ordered by entry
    (catalog order) then width and does not depend on the worker count.
    """
    entries = list(catalog)
    plan = config.plan()
    tasks = []
    layout = []  # (entry, width, mode, index range into tasks)
    for entry in entries:
        for width, mode in plan:
            lo = len(tasks)
            if mode is Mode.EXHAUSTIVE:
                n = 1 << width
                parts = config.workers if n >= 64 else 1
                for rng in _strata(n, parts):
                    tasks.append(("slice", entry, width, rng))
            else:
                tasks.append(("sampled", entry, width, config))
            layout.append((entry, width, mode, lo, len(tasks)))

    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]

    verdicts = []
    for entry, width, mode, lo, hi in layout:
        if mode is Mode.EXHAUSTIVE:
            part = results[lo:hi]
            elapsed = sum(r.stats.elapsed for r in part)
            verdicts.append(_merge_slices(entry, width, part, elapsed))
        else:
            verdicts.append(results[lo])
    return verdicts


def mutate_ic(entry: ICEntry, ic: Cond, name: Optional[str] = None) -> ICEntry:
    """Copy of ``entry`` with its condition replaced."""
    return replace(entry, ic=ic, name=name or f"{entry.name}-mutated")
