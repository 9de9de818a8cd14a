import pytest

from bvinvert.bitvec import BitVec
from bvinvert.catalog import Catalog, CatalogError, ICEntry, load, seed_catalog
from bvinvert.syntax import parse_atom, parse_catalog, parse_cond, print_atom, print_cond
from bvinvert.terms import TRUE, Assignment, Atom, Pred, S, T, X, eval_atom, eval_term

SEED = {
    "add-eq": ("(= (bvadd x s) t)", "true"),
    "mul-eq": ("(= (bvmul x s) t)", "(= (bvand (bvor (bvneg s) s) t) t)"),
    "and-eq": ("(= (bvand x s) t)", "(= (bvand t s) t)"),
    "shl-ugt": ("(bvugt (bvshl x s) t)", "(bvult t (bvshl ones s))"),
    "ashr-ult": ("(bvult (bvashr s x) t)",
                 "(and (or (bvult s t) (not (bvslt s zero))) (distinct t zero))"),
}

# Six literal shapes in the style of a row/column table, none of them seeded.
USER_FILE = """
(entry :name "neg-eq"  :literal (= (bvneg x) t) :ic true :witness-hints ((bvneg t)))
(entry :name "not-eq"  :literal (= (bvnot x) t) :ic true :witness-hints ((bvnot t)))
(entry :name "add-neq" :literal (distinct (bvadd x s) t) :ic true)
(entry :name "or-eq"   :literal (= (bvor x s) t) :ic (= (bvor t s) t))
(entry :name "and-ule" :literal (bvule (bvand x s) t) :ic true)
(entry :name "shr-eq"  :literal (= (bvlshr x s) t) :ic (= (bvlshr (bvshl t s) s) t))
"""


def test_seed_has_five_exact_entries():
    cat = seed_catalog()
    assert len(cat) == 5
    assert cat.names == list(SEED)
    for e in cat:
        lit, ic = SEED[e.name]
        assert e.literal == parse_atom(lit)
        assert e.ic == parse_cond(ic)
    assert cat["add-eq"].witness_hints == (parse_cond("(= (bvsub t s) t)").lhs,)
    assert cat["shl-ugt"].witness_hints == (parse_cond("(= ones t)").lhs,)
    for name in ("mul-eq", "and-eq", "ashr-ult"):
        assert cat[name].witness_hints == ()


def test_seed_round_trips_through_syntax():
    for e in seed_catalog():
        assert parse_atom(print_atom(e.literal)) == e.literal
        assert parse_cond(print_cond(e.ic)) == e.ic


def test_add_hint_solves_every_pair_width_3():
    e = seed_catalog()["add-eq"]
    (hint,) = e.witness_hints
    for s in range(8):
        for t in range(8):
            env = Assignment.of(3, s=s, t=t)
            x = eval_term(hint, env)
            assert eval_atom(e.literal, Assignment(3, x=x, s=env.s, t=env.t))
            assert (x.value + s) % 8 == t


def test_load():
    seed = seed_catalog()
    assert load(seed, []) == seed
    merged = load(seed, parse_catalog(USER_FILE))
    assert len(merged) == 11
    assert merged.names[:5] == seed.names


def test_load_rejects_duplicates():
    seed = seed_catalog()
    with pytest.raises(CatalogError):
        load(seed, [seed["add-eq"]])


def test_entry_invariants():
    lit = Atom(Pred.EQ, X, T)
    with pytest.raises(CatalogError):
        ICEntry("bad-shape", lit, TRUE)
    good = parse_atom("(= (bvadd x s) t)")
    with pytest.raises(CatalogError):
        ICEntry("x-in-ic", good, Atom(Pred.EQ, X, S))
    with pytest.raises(CatalogError):
        ICEntry("two-x", parse_atom("(= (bvadd x x) t)"), TRUE)
    with pytest.raises(CatalogError):
        ICEntry("", good, TRUE)


def test_catalog_lookup():
    cat = seed_catalog()
    assert "and-eq" in cat
    assert "nope" not in cat
    with pytest.raises(KeyError):
        cat["nope"]
    with pytest.raises(CatalogError):
        Catalog([cat["add-eq"], cat["add-eq"]])
