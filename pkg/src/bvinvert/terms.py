"""Width-parametric expression IR over the variables x, s and t.

Terms never carry a width; the width comes from the :class:`Assignment` they
are evaluated under.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Union

from . import bitvec as bv
from .bitvec import BitVec

VARIABLES = ("x", "s", "t")


class UnOp(enum.Enum):
    NOT = "bvnot"
    NEG = "bvneg"


class BinOp(enum.Enum):
    AND = "bvand"
    OR = "bvor"
    ADD = "bvadd"
    SUB = "bvsub"
    MUL = "bvmul"
    SHL = "bvshl"
    LSHR = "bvlshr"
    ASHR = "bvashr"


class Pred(enum.Enum):
    EQ = "="
    NEQ = "distinct"
    ULT = "bvult"
    UGT = "bvugt"
    ULE = "bvule"
    UGE = "bvuge"
    SLT = "bvslt"
    SGT = "bvsgt"
    SLE = "bvsle"
    SGE = "bvsge"


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if self.name not in VARIABLES:
            raise ValueError(f"unknown variable {self.name!r}; expected one of x, s, t")


@dataclass(frozen=True)
class ConstZero:
    pass


@dataclass(frozen=True)
class ConstOnes:
    pass


@dataclass(frozen=True)
class Unary:
    op: UnOp
    arg: Term


@dataclass(frozen=True)
class Binary:
    op: BinOp
    lhs: Term
    rhs: Term


Term = Union[Var, ConstZero, ConstOnes, Unary, Binary]


@dataclass(frozen=True)
class Atom:
    pred: Pred
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Not:
    arg: Cond


@dataclass(frozen=True)
class And:
    lhs: Cond
    rhs: Cond


@dataclass(frozen=True)
class Or:
    lhs: Cond
    rhs: Cond


Cond = Union[Top, Atom, Not, And, Or]

X, S, T = Var("x"), Var("s"), Var("t")
ZERO, ONES = ConstZero(), ConstOnes()
TRUE = Top()


class UnboundVariable(KeyError):
    pass


@dataclass(frozen=True)
class Assignment:
    width: int
    x: Optional[BitVec] = None
    s: Optional[BitVec] = None
    t: Optional[BitVec] = None

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be positive")
        for name in VARIABLES:
            v = getattr(self, name)
            if v is not None and v.width != self.width:
                raise bv.WidthMismatch(
                    f"{name} has width {v.width}, assignment width is {self.width}"
                )

    @classmethod
    def of(cls, width: int, **values: int) -> Assignment:
        """Shorthand taking unsigned ints: ``Assignment.of(4, s=1, t=0)``."""
        return cls(width, **{k: BitVec(v, width) for k, v in values.items()})

    def lookup(self, name: str) -> BitVec:
        v = getattr(self, name)
        if v is None:
            raise UnboundVariable(name)
        return v


UNARY_SEMANTICS: dict[UnOp, Callable[[BitVec], BitVec]] = {
    UnOp.NOT: bv.bv_not,
    UnOp.NEG: bv.bv_neg,
}

BINARY_SEMANTICS: dict[BinOp, Callable[[BitVec, BitVec], BitVec]] = {
    BinOp.AND: bv.bv_and,
    BinOp.OR: bv.bv_or,
    BinOp.ADD: bv.bv_add,
    BinOp.SUB: bv.bv_sub,
    BinOp.MUL: bv.bv_mul,
    BinOp.SHL: bv.bv_shl,
    BinOp.LSHR: bv.bv_lshr,
    BinOp.ASHR: bv.bv_ashr,
}

PRED_SEMANTICS: dict[Pred, Callable[[BitVec, BitVec], bool]] = {
    Pred.EQ: bv.bv_eq,
    Pred.NEQ: lambda a, b: not bv.bv_eq(a, b),
    Pred.ULT: bv.bv_ult,
    Pred.UGT: bv.bv_ugt,
    Pred.ULE: bv.bv_ule,
    Pred.UGE: bv.bv_uge,
    Pred.SLT: bv.bv_slt,
    Pred.SGT: bv.bv_sgt,
    Pred.SLE: bv.bv_sle,
    Pred.SGE: bv.bv_sge,
}


def eval_term(e: Term, env: Assignment) -> BitVec:
    if isinstance(e, Var):
        return env.lookup(e.name)
    if isinstance(e, ConstZero):
        return bv.zeros(env.width)
    if isinstance(e, ConstOnes):
        return bv.ones(env.width)
    if isinstance(e, Unary):
        return UNARY_SEMANTICS[e.op](eval_term(e.arg, env))
    if isinstance(e, Binary):
        return BINARY_SEMANTICS[e.op](eval_term(e.lhs, env), eval_term(e.rhs, env))
    raise TypeError(f"not a term: {e!r}")


def eval_atom(a: Atom, env: Assignment) -> bool:
    return PRED_SEMANTICS[a.pred](eval_term(a.lhs, env), eval_term(a.rhs, env))


def eval_cond(c: Cond, env: Assignment) -> bool:
    if isinstance(c, Top):
        return True
    if isinstance(c, Atom):
        return eval_atom(c, env)
    if isinstance(c, Not):
        return not eval_cond(c.arg, env)
    if isinstance(c, And):
        return eval_cond(c.lhs, env) and eval_cond(c.rhs, env)
    if isinstance(c, Or):
        return eval_cond(c.lhs, env) or eval_cond(c.rhs, env)
    raise TypeError(f"not a condition: {c!r}")


def _children(node) -> tuple:
    if isinstance(node, Unary):
        return (node.arg,)
    if isinstance(node, Not):
        return (node.arg,)
    if isinstance(node, (Binary, Atom, And, Or)):
        return (node.lhs, node.rhs)
    return ()


def var_occurrences(node, name: str) -> int:
    if isinstance(node, Var):
        return int(node.name == name)
    return sum(var_occurrences(c, name) for c in _children(node))


def vars_of(node) -> frozenset[str]:
    if isinstance(node, Var):
        return frozenset((node.name,))
    out: frozenset[str] = frozenset()
    for c in _children(node):
        out |= vars_of(c)
    return out


def substitute(e, name: str, replacement: Term):
    """Replace every occurrence of variable ``name`` in a term or condition."""
    if isinstance(e, Var):
        return replacement if e.name == name else e
    if isinstance(e, Unary):
        return Unary(e.op, substitute(e.arg, name, replacement))
    if isinstance(e, Binary):
        return Binary(e.op, substitute(e.lhs, name, replacement), substitute(e.rhs, name, replacement))
    if isinstance(e, Atom):
        return Atom(e.pred, substitute(e.lhs, name, replacement), substitute(e.rhs, name, replacement))
    if isinstance(e, Not):
        return Not(substitute(e.arg, name, replacement))
    if isinstance(e, (And, Or)):
        return type(e)(substitute(e.lhs, name, replacement), substitute(e.rhs, name, replacement))
    return e


def check_literal_shape(a: Atom) -> Optional[str]:
    """Return None if ``a`` is an invertibility literal, else the reason it is not.

    Accepted shapes are ``x op s ~ t``, ``s op x ~ t`` and the unary
    ``op x ~ t`` for any operator ``op`` and predicate ``~``.
    """
    if not isinstance(a, Atom):
        return "not an atom"
    n = var_occurrences(a, "x")
    if n != 1:
        return f"x must occur exactly once, found {n} occurrences"
    if a.rhs != T:
        return "right-hand side must be the variable t"
    lhs = a.lhs
    if isinstance(lhs, Unary):
        if lhs.arg != X:
            return "unary literal must apply its operator directly to x"
        return None
    if isinstance(lhs, Binary):
        if (lhs.lhs, lhs.rhs) in ((X, S), (S, X)):
            return None
        return "binary literal must have operands (x, s) or (s, x)"
    return "left-hand side must be a single operator application"


# Packed-int evaluation.  A compiled term is a closure over plain ints for a
# fixed width; it mirrors eval_term but skips BitVec allocation, which matters
# for the sampled verifier's inner loop.

IntFn = Callable[[int, int, int], int]


def _int_binop(op: BinOp, w: int) -> Callable[[int, int], int]:
    m = (1 << w) - 1
    sign = 1 << (w - 1)
    if op is BinOp.AND:
        return lambda a, b: a & b
    if op is BinOp.OR:
        return lambda a, b: a | b
    if op is BinOp.ADD:
        return lambda a, b: (a + b) & m
    if op is BinOp.SUB:
        return lambda a, b: (a - b) & m
    if op is BinOp.MUL:
        return lambda a, b: (a * b) & m
    if op is BinOp.SHL:
        return lambda a, b: (a << b) & m if b < w else 0
    if op is BinOp.LSHR:
        return lambda a, b: a >> b if b < w else 0
    if op is BinOp.ASHR:
        def ashr(a, b):
            sa = a - (1 << w) if a & sign else a
            return (sa >> min(b, w)) & m
        return ashr
    raise ValueError(op)


def _int_pred(p: Pred, w: int) -> Callable[[int, int], bool]:
    half = 1 << (w - 1)
    full = 1 << w

    def sg(a: int) -> int:
        return a - full if a >= half else a

    table = {
        Pred.EQ: lambda a, b: a == b,
        Pred.NEQ: lambda a, b: a != b,
        Pred.ULT: lambda a, b: a < b,
        Pred.UGT: lambda a, b: a > b,
        Pred.ULE: lambda a, b: a <= b,
        Pred.UGE: lambda a, b: a >= b,
        Pred.SLT: lambda a, b: sg(a) < sg(b),
        Pred.SGT: lambda a, b: sg(a) > sg(b),
        Pred.SLE: lambda a, b: sg(a) <= sg(b),
        Pred.SGE: lambda a, b: sg(a) >= sg(b),
    }
    return table[p]


def compile_term(e: Term, width: int) -> IntFn:
    """Compile to ``f(x, s, t) -> int`` over unsigned ints of ``width`` bits."""
    m = (1 << width) - 1
    if isinstance(e, Var):
        if e.name == "x":
            return lambda x, s, t: x
        if e.name == "s":
            return lambda x, s, t: s
        return lambda x, s, t: t
    if isinstance(e, ConstZero):
        return lambda x, s, t: 0
    if isinstance(e, ConstOnes):
        return lambda x, s, t: m
    if isinstance(e, Unary):
        f = compile_term(e.arg, width)
        if e.op is UnOp.NOT:
            return lambda x, s, t: f(x, s, t) ^ m
        return lambda x, s, t: -f(x, s, t) & m
    if isinstance(e, Binary):
        op = _int_binop(e.op, width)
        f, g = compile_term(e.lhs, width), compile_term(e.rhs, width)
        return lambda x, s, t: op(f(x, s, t), g(x, s, t))
    raise TypeError(f"not a term: {e!r}")


def compile_cond(c: Cond, width: int) -> Callable[[int, int, int], bool]:
    if isinstance(c, Top):
        return lambda x, s, t: True
    if isinstance(c, Atom):
        p = _int_pred(c.pred, width)
        f, g = compile_term(c.lhs, width), compile_term(c.rhs, width)
        return lambda x, s, t: p(f(x, s, t), g(x, s, t))
    if isinstance(c, Not):
        h = compile_cond(c.arg, width)
        return lambda x, s, t: not h(x, s, t)
    if isinstance(c, And):
        h, k = compile_cond(c.lhs, width), compile_cond(c.rhs, width)
        return lambda x, s, t: h(x, s, t) and k(x, s, t)
    if isinstance(c, Or):
        h, k = compile_cond(c.lhs, width), compile_cond(c.rhs, width)
        return lambda x, s, t: h(x, s, t) or k(x, s, t)
    raise TypeError(f"not a condition: {c!r}")
