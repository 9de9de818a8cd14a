"""Vectorized evaluation of terms over numpy arrays of unsigned values.

Values are held in ``uint64`` arrays, so widths up to 63 are supported.  The
exhaustive verifier uses these kernels to evaluate a literal over a whole
``x`` by ``t`` grid at once for a fixed ``s``.
"""

from __future__ import annotations

import numpy as np

from .terms import (
    And,
    Atom,
    BinOp,
    Binary,
    Cond,
    ConstOnes,
    ConstZero,
    Not,
    Or,
    Pred,
    Term,
    Top,
    UnOp,
    Unary,
    Var,
)

MAX_KERNEL_WIDTH = 63

U64 = np.uint64


def _signed(a: np.ndarray, width: int) -> np.ndarray:
    a = a.astype(np.int64)
    return np.where(a >= (1 << (width - 1)), a - (1 << width), a)


def eval_term_array(e: Term, width: int, env: dict[str, np.ndarray]) -> np.ndarray:
    if width > MAX_KERNEL_WIDTH:
        raise ValueError(f"array kernels support widths up to {MAX_KERNEL_WIDTH}")
    m = U64((1 << width) - 1)

    def go(e):
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, ConstZero):
            return U64(0)
        if isinstance(e, ConstOnes):
            return m
        if isinstance(e, Unary):
            a = go(e.arg)
            if e.op is UnOp.NOT:
                return a ^ m
            return (U64(0) - a) & m
        if isinstance(e, Binary):
            a, b = go(e.lhs), go(e.rhs)
            op = e.op
            if op is BinOp.AND:
                return a & b
            if op is BinOp.OR:
                return a | b
            if op is BinOp.ADD:
                return (a + b) & m
            if op is BinOp.SUB:
                return (a - b) & m
            if op is BinOp.MUL:
                return (a * b) & m
            # Shift amounts >= width saturate; clamp before shifting so numpy
            # never sees an out-of-range count.
            big = b >= U64(width)
            k = np.minimum(b, U64(width - 1))
            if op is BinOp.SHL:
                return np.where(big, U64(0), (a << k) & m)
            if op is BinOp.LSHR:
                return np.where(big, U64(0), a >> k)
            if op is BinOp.ASHR:
                sa = _signed(np.asarray(a, dtype=U64), width)
                r = sa >> np.where(big, width - 1, k).astype(np.int64)
                return r.astype(U64) & m
        raise TypeError(f"not a term: {e!r}")

    with np.errstate(over="ignore"):
        return np.asarray(go(e), dtype=U64)


_COMPARE = {
    Pred.EQ: np.equal,
    Pred.NEQ: np.not_equal,
    Pred.ULT: np.less,
    Pred.UGT: np.greater,
    Pred.ULE: np.less_equal,
    Pred.UGE: np.greater_equal,
    Pred.SLT: np.less,
    Pred.SGT: np.greater,
    Pred.SLE: np.less_equal,
    Pred.SGE: np.greater_equal,
}
_SIGNED = {Pred.SLT, Pred.SGT, Pred.SLE, Pred.SGE}


def eval_cond_array(c: Cond, width: int, env: dict[str, np.ndarray]) -> np.ndarray:
    if isinstance(c, Top):
        return np.asarray(True)
    if isinstance(c, Atom):
        a = eval_term_array(c.lhs, width, env)
        b = eval_term_array(c.rhs, width, env)
        if c.pred in _SIGNED:
            a, b = _signed(a, width), _signed(b, width)
        return _COMPARE[c.pred](a, b)
    if isinstance(c, Not):
        return ~eval_cond_array(c.arg, width, env)
    if isinstance(c, And):
        return eval_cond_array(c.lhs, width, env) & eval_cond_array(c.rhs, width, env)
    if isinstance(c, Or):
        return eval_cond_array(c.lhs, width, env) | eval_cond_array(c.rhs, width, env)
    raise TypeError(f"not a condition: {c!r}")
