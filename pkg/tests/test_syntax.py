import pytest
from hypothesis import given, settings

from bvinvert.catalog import seed_text
from bvinvert.syntax import (
    ParseError,
    parse_atom,
    parse_catalog,
    parse_cond,
    parse_term,
    print_atom,
    print_catalog,
    print_cond,
    print_term,
    read_all,
)
from bvinvert.terms import (
    ONES,
    TRUE,
    ZERO,
    And,
    Atom,
    BinOp,
    Binary,
    Not,
    Or,
    Pred,
    S,
    T,
    UnOp,
    Unary,
    X,
)

from strategies import conds, terms


def test_parse_examples():
    assert parse_atom("(= (bvadd x s) t)") == Atom(Pred.EQ, Binary(BinOp.ADD, X, S), T)
    assert parse_cond("(= (bvand (bvor (bvneg s) s) t) t)") == Atom(
        Pred.EQ, Binary(BinOp.AND, Binary(BinOp.OR, Unary(UnOp.NEG, S), S), T), T
    )
    assert parse_cond("(bvult t (bvshl ones s))") == Atom(Pred.ULT, T, Binary(BinOp.SHL, ONES, S))
    assert parse_cond("true") == TRUE
    assert parse_term("zero") == ZERO


def test_nary_folds_left():
    a, b, c = (parse_cond(f"(= {v} zero)") for v in "stx")
    assert parse_cond("(and (= s zero) (= t zero) (= x zero))") == And(And(a, b), c)
    assert parse_cond("(or (= s zero) (= t zero) (= x zero))") == Or(Or(a, b), c)


def test_comments_and_whitespace():
    src = """
    ; leading comment
    (distinct   t   ; trailing
       zero)
    """
    assert parse_cond(src) == Atom(Pred.NEQ, T, ZERO)


def test_unbalanced_reports_end_of_input():
    src = "(= (bvand x s)"
    with pytest.raises(ParseError) as exc:
        parse_atom(src)
    assert exc.value.offset == len(src)
    assert exc.value.expected == "')'"


@pytest.mark.parametrize("src, offset", [
    ("(bvfoo x s)", 1),
    ("(= (bvudiv x s) t)", 4),
    ("(= y t)", 3),
    ("(= x)", 0),
    ("(bvnot x s)", 1),
    ("(= (bvnot x s) t)", 3),
    ("(= x t) extra", 8),
    (")", 0),
    ("", 0),
])
def test_parse_errors_are_positioned(src, offset):
    with pytest.raises(ParseError) as exc:
        parse_cond(src)
    assert exc.value.offset == offset
    assert 0 <= exc.value.offset <= len(src)


def test_error_line_and_column():
    src = "(and (= s t)\n     (bvfoo s t))"
    with pytest.raises(ParseError) as exc:
        parse_cond(src)
    assert (exc.value.line, exc.value.column) == (2, 7)
    assert str(exc.value).startswith("2:7:")


def test_print_examples():
    assert print_atom(Atom(Pred.EQ, Binary(BinOp.ADD, X, S), T)) == "(= (bvadd x s) t)"
    assert print_cond(TRUE) == "true"
    assert print_cond(Not(Atom(Pred.SLT, S, ZERO))) == "(not (bvslt s zero))"


@given(terms())
@settings(max_examples=300)
def test_term_round_trip(e):
    assert parse_term(print_term(e)) == e


@given(conds())
@settings(max_examples=300)
def test_cond_round_trip_and_idempotence(c):
    text = print_cond(c)
    assert parse_cond(text) == c
    assert print_cond(parse_cond(text)) == text


def test_every_keyword_parses():
    for op in UnOp:
        assert parse_term(f"({op.value} s)") == Unary(op, S)
    for op in BinOp:
        assert parse_term(f"({op.value} s t)") == Binary(op, S, T)
    for p in Pred:
        assert parse_cond(f"({p.value} s t)") == Atom(p, S, T)


def test_read_all_stream():
    forms = read_all("(a b) c (d (e))")
    assert len(forms) == 3


# Catalog files.

def test_seed_file_parses_to_five():
    entries = parse_catalog(seed_text())
    assert [e.name for e in entries] == ["add-eq", "mul-eq", "and-eq", "shl-ugt", "ashr-ult"]


def test_empty_catalog():
    assert parse_catalog("") == []
    assert parse_catalog("; only a comment\n") == []


def test_duplicate_names_rejected():
    rec = '(entry :name "a" :literal (= (bvadd x s) t) :ic true)\n'
    with pytest.raises(ParseError) as exc:
        parse_catalog(rec + rec)
    assert "duplicate" in exc.value.message
    assert exc.value.line == 2


def test_catalog_round_trip():
    entries = parse_catalog(seed_text())
    assert parse_catalog(print_catalog(entries)) == entries


@pytest.mark.parametrize("src, fragment", [
    ('(entry :name "a" :ic true)', "missing :literal"),
    ('(entry :name "a" :literal (= (bvadd x x) t) :ic true)', "exactly once"),
    ('(entry :name "a" :literal (= (bvadd x s) t) :ic (= x t))', "only mention s and t"),
    ('(entry :name "a" :literal (= (bvadd x s) t) :ic true :witness-hints (x))', "hints"),
    ('(entry :name "a" :literal (= (bvadd x s) t) :ic true :color red)', "unknown entry field"),
    ('(entry :name "a" :literal (= (bvadd x s) t) :ic)', "key value pairs"),
    ('(item :name "a")', "(entry"),
    ('(entry :name "a :literal x)', "unterminated string"),
])
def test_catalog_errors(src, fragment):
    with pytest.raises(ParseError) as exc:
        parse_catalog(src)
    assert fragment in str(exc.value)


def test_catalog_optional_fields():
    src = r'''
    (entry :name "neg-eq" :literal (= (bvneg x) t) :ic true
           :provenance "a \"quoted\" note" :witness-hints ((bvneg t))
           :expect-counterexample false)
    '''
    (e,) = parse_catalog(src)
    assert e.provenance == 'a "quoted" note'
    assert e.witness_hints == (Unary(UnOp.NEG, T),)
    assert e.expect_counterexample is False
