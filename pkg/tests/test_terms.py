import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bvinvert import bitvec as bv
from bvinvert.bitvec import BitVec
from bvinvert.terms import (
    ONES,
    TRUE,
    ZERO,
    And,
    Assignment,
    Atom,
    BinOp,
    Binary,
    Not,
    Or,
    Pred,
    S,
    T,
    UnboundVariable,
    UnOp,
    Unary,
    Var,
    X,
    check_literal_shape,
    compile_cond,
    compile_term,
    eval_atom,
    eval_cond,
    eval_term,
    substitute,
    vars_of,
)

from strategies import atoms, conds, terms

MUL_IC = Atom(Pred.EQ, Binary(BinOp.AND, Binary(BinOp.OR, Unary(UnOp.NEG, S), S), T), T)


def test_eval_term_examples():
    assert eval_term(X, Assignment.of(4, x=0b0101)) == BitVec(0b0101, 4)
    shl = Binary(BinOp.SHL, ONES, S)
    assert eval_term(shl, Assignment.of(4, s=1)) == BitVec((15 * 2) % 16, 4)
    lhs = MUL_IC.lhs
    assert eval_term(lhs, Assignment.of(4, s=0, t=0b0101)) == BitVec(0, 4)


def test_eval_cond_examples():
    assert eval_cond(TRUE, Assignment(3))
    and_ic = Atom(Pred.EQ, Binary(BinOp.AND, T, S), T)
    assert eval_atom(and_ic, Assignment.of(1, s=0, t=1)) is False
    ashr_ic = And(Or(Atom(Pred.ULT, S, T), Not(Atom(Pred.SLT, S, ZERO))), Atom(Pred.NEQ, T, ZERO))
    assert eval_cond(ashr_ic, Assignment.of(4, s=1, t=0)) is False


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_term(X, Assignment.of(4, s=1))
    with pytest.raises(UnboundVariable):
        eval_cond(Atom(Pred.EQ, X, T), Assignment.of(4, t=1))


def test_assignment_width_checked():
    with pytest.raises(bv.WidthMismatch):
        Assignment(4, s=BitVec(1, 3))
    with pytest.raises(ValueError):
        Assignment(0)


def test_variables_restricted():
    with pytest.raises(ValueError):
        Var("y")


def test_vars_of_examples():
    assert vars_of(ONES) == frozenset()
    assert vars_of(MUL_IC) == {"s", "t"}
    assert vars_of(Binary(BinOp.SHL, X, S)) == {"x", "s"}
    assert vars_of(TRUE) == frozenset()


@pytest.mark.parametrize("atom, ok", [
    (Atom(Pred.EQ, Binary(BinOp.ADD, X, S), T), True),
    (Atom(Pred.EQ, Binary(BinOp.ADD, X, X), T), False),
    (Atom(Pred.UGT, Binary(BinOp.SHL, X, S), T), True),
    (Atom(Pred.ULT, Binary(BinOp.ASHR, S, X), T), True),
    (Atom(Pred.EQ, Unary(UnOp.NEG, X), T), True),
    (Atom(Pred.NEQ, Unary(UnOp.NOT, X), T), True),
    (Atom(Pred.EQ, X, T), False),
    (Atom(Pred.EQ, Binary(BinOp.ADD, X, T), S), False),
    (Atom(Pred.EQ, Binary(BinOp.ADD, S, T), T), False),
    (Atom(Pred.EQ, Binary(BinOp.ADD, X, ONES), T), False),
    (Atom(Pred.EQ, Unary(UnOp.NEG, Unary(UnOp.NOT, X)), T), False),
])
def test_check_literal_shape(atom, ok):
    assert (check_literal_shape(atom) is None) == ok


def test_substitute():
    lit = Atom(Pred.EQ, Binary(BinOp.ADD, X, S), T)
    hint = Binary(BinOp.SUB, T, S)
    sub = substitute(lit, "x", hint)
    assert sub == Atom(Pred.EQ, Binary(BinOp.ADD, hint, S), T)
    assert "x" not in vars_of(sub)


def _direct(e, env):
    # Reference denotation computed straight from bitvec, independent of the
    # evaluator's dispatch tables.
    if isinstance(e, Var):
        return getattr(env, e.name)
    if e == ZERO:
        return bv.zeros(env.width)
    if e == ONES:
        return bv.ones(env.width)
    if isinstance(e, Unary):
        a = _direct(e.arg, env)
        return bv.bv_not(a) if e.op is UnOp.NOT else bv.bv_neg(a)
    a, b = _direct(e.lhs, env), _direct(e.rhs, env)
    fn = {
        BinOp.AND: bv.bv_and, BinOp.OR: bv.bv_or, BinOp.ADD: bv.bv_add,
        BinOp.SUB: bv.bv_sub, BinOp.MUL: bv.bv_mul, BinOp.SHL: bv.bv_shl_iter,
        BinOp.LSHR: bv.bv_shr_iter, BinOp.ASHR: bv.bv_ashr_iter,
    }[e.op]
    return fn(a, b)


@st.composite
def envs(draw):
    w = draw(st.integers(1, 70))
    v = st.integers(0, 2**w - 1)
    return Assignment.of(w, x=draw(v), s=draw(v), t=draw(v))


@given(terms(), envs())
def test_eval_is_homomorphic(e, env):
    assert eval_term(e, env) == _direct(e, env)


@given(terms(), envs())
def test_compiled_term_matches_reference(e, env):
    f = compile_term(e, env.width)
    assert f(env.x.value, env.s.value, env.t.value) == eval_term(e, env).value


@given(conds(), envs())
@settings(max_examples=300)
def test_compiled_cond_matches_reference(c, env):
    f = compile_cond(c, env.width)
    assert f(env.x.value, env.s.value, env.t.value) == eval_cond(c, env)


@given(conds(), conds(), envs())
def test_boolean_algebra(a, b, env):
    assert eval_cond(Not(a), env) == (not eval_cond(a, env))
    assert eval_cond(And(a, b), env) == (eval_cond(a, env) and eval_cond(b, env))
    assert eval_cond(Or(a, b), env) == (eval_cond(a, env) or eval_cond(b, env))


@given(terms(), terms(), envs())
def test_neq_is_not_eq(l, r, env):
    assert eval_atom(Atom(Pred.NEQ, l, r), env) == eval_cond(Not(Atom(Pred.EQ, l, r)), env)


@given(atoms())
def test_vars_of_is_exact(a):
    expected = {n for n in "xst" if f"Var(name='{n}')" in repr(a)}
    assert vars_of(a) == expected
