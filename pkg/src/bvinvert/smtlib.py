"""SMT-LIB 2 benchmark emission and external solver cross-checking.

A benchmark for entry ``e`` at width ``w`` asserts::

    (distinct IC (exists ((x (_ BitVec w))) LITERAL))

over free constants ``s`` and ``t``.  ``unsat`` certifies the equivalence at
that width; ``sat`` means some (s, t) disagrees.
"""

from __future__ import annotations

import shutil
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .catalog import ICEntry
from .terms import (
    And,
    Atom,
    Binary,
    Cond,
    ConstOnes,
    ConstZero,
    Not,
    Or,
    Term,
    Top,
    Unary,
    Var,
)
from .verify import MAX_EXHAUSTIVE_WIDTH, Status, verify_exhaustive


def smt_term(e: Term, width: int) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, ConstZero):
        return "#b" + "0" * width
    if isinstance(e, ConstOnes):
        return "#b" + "1" * width
    if isinstance(e, Unary):
        return f"({e.op.value} {smt_term(e.arg, width)})"
    if isinstance(e, Binary):
        return f"({e.op.value} {smt_term(e.lhs, width)} {smt_term(e.rhs, width)})"
    raise TypeError(f"not a term: {e!r}")


def smt_cond(c: Cond, width: int) -> str:
    if isinstance(c, Top):
        return "true"
    if isinstance(c, Atom):
        return f"({c.pred.value} {smt_term(c.lhs, width)} {smt_term(c.rhs, width)})"
    if isinstance(c, Not):
        return f"(not {smt_cond(c.arg, width)})"
    if isinstance(c, And):
        return f"(and {smt_cond(c.lhs, width)} {smt_cond(c.rhs, width)})"
    if isinstance(c, Or):
        return f"(or {smt_cond(c.lhs, width)} {smt_cond(c.rhs, width)})"
    raise TypeError(f"not a condition: {c!r}")


def emit_smtlib(entry: ICEntry, width: int) -> str:
    if width < 1:
        raise ValueError("width must be positive")
    sort = f"(_ BitVec {width})"
    return "\n".join([
        f"; {entry.name} at width {width}",
        "(set-logic BV)",
        f"(declare-fun s () {sort})",
        f"(declare-fun t () {sort})",
        f"(define-fun ic () Bool {smt_cond(entry.ic, width)})",
        f"(define-fun invertible () Bool (exists ((x {sort})) {smt_cond(entry.literal, width)}))",
        "(assert (distinct ic invertible))",
        "(check-sat)",
        "(exit)",
        "",
    ])


def benchmark_filename(entry: ICEntry, width: int) -> str:
    return f"{entry.name}_w{width}.smt2"


def write_benchmarks(entries: Iterable[ICEntry], widths: Iterable[int], out_dir: Union[str, Path]) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    widths = list(widths)
    for e in entries:
        for w in widths:
            p = out / benchmark_filename(e, w)
            p.write_text(emit_smtlib(e, w), encoding="utf-8")
            paths.append(p)
    return paths


@dataclass(frozen=True)
class SolverRunConfig:
    executable: str
    extra_args: tuple[str, ...] = ()
    timeout: float = 60.0

    def __post_init__(self):
        if self.timeout < 1:
            raise ValueError("solver timeout must be at least one second")


@dataclass(frozen=True)
class CrosscheckRow:
    entry: str
    width: int
    answer: str  # sat | unsat | unknown | timeout | error
    verdict: Optional[Status]
    agree: Optional[bool]


def run_solver(path: Path, cfg: SolverRunConfig) -> str:
    try:
        proc = subprocess.run(
            [cfg.executable, *cfg.extra_args, str(path)],
            capture_output=True,
            text=True,
            timeout=cfg.timeout,
        )
    except subprocess.TimeoutExpired:
        return "timeout"
    lines = proc.stdout.strip().splitlines()
    first = lines[0].strip() if lines else ""
    return first if first in ("sat", "unsat", "unknown") else "error"


def _agreement(answer: str, verdict: Optional[Status]) -> Optional[bool]:
    if verdict is None or answer not in ("sat", "unsat"):
        return None
    expected = "unsat" if verdict is Status.VALID else "sat"
    return answer == expected


def crosscheck(
    entries: Sequence[ICEntry],
    widths: Sequence[int],
    cfg: SolverRunConfig,
    out_dir: Union[str, Path],
    workers: int = 1,
) -> list[CrosscheckRow]:
    """Emit benchmarks, run the solver on each, and compare with exhaustive verdicts.

    ``agree`` is None where no comparison is possible (width out of the
    exhaustive range, or the solver gave no sat/unsat answer).
    """
    exe = Path(cfg.executable)
    if not exe.exists() and shutil.which(cfg.executable) is None:
        raise FileNotFoundError(f"solver executable not found: {cfg.executable}")
    jobs = [(e, w) for e in entries for w in widths]
    paths = write_benchmarks(entries, widths, out_dir)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        answers = list(pool.map(lambda p: run_solver(p, cfg), paths))
    rows = []
    for (e, w), answer in zip(jobs, answers):
        verdict = verify_exhaustive(e, w).status if w <= MAX_EXHAUSTIVE_WIDTH else None
        rows.append(CrosscheckRow(e.name, w, answer, verdict, _agreement(answer, verdict)))
    return rows
