"""S-expression syntax for terms, literals, conditions and catalog files.

Grammar::

    term := x | s | t | zero | ones
          | (bvnot term) | (bvneg term)
          | (bvand|bvor|bvadd|bvsub|bvmul|bvshl|bvlshr|bvashr term term)
    atom := (=|distinct|bvult|bvugt|bvule|bvuge|bvslt|bvsgt|bvsle|bvsge term term)
    cond := true | atom | (not cond) | (and cond cond+) | (or cond cond+)

n-ary ``and``/``or`` fold to the left.  Comments run from ``;`` to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .terms import (
    ONES,
    TRUE,
    ZERO,
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

_UNOPS = {op.value: op for op in UnOp}
_BINOPS = {op.value: op for op in BinOp}
_PREDS = {p.value: p for p in Pred}
_LEAVES = {"x": Var("x"), "s": Var("s"), "t": Var("t"), "zero": ZERO, "ones": ONES}


class ParseError(ValueError):
    def __init__(self, message: str, src: str, offset: int, expected: Optional[str] = None):
        self.message = message
        self.offset = offset
        self.line = src.count("\n", 0, offset) + 1
        self.column = offset - (src.rfind("\n", 0, offset) + 1) + 1
        self.expected = expected
        text = f"{self.line}:{self.column}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str  # "(", ")", "sym", "str"
    text: str
    offset: int


def tokenize(src: str) -> Iterator[Token]:
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
        elif c == ";":
            j = src.find("\n", i)
            i = n if j < 0 else j
        elif c in "()":
            yield Token(c, c, i)
            i += 1
        elif c == '"':
            j = i + 1
            buf = []
            while True:
                if j >= n:
                    raise ParseError("unterminated string", src, i)
                if src[j] == "\\" and j + 1 < n:
                    buf.append(src[j + 1])
                    j += 2
                elif src[j] == '"':
                    break
                else:
                    buf.append(src[j])
                    j += 1
            yield Token("str", "".join(buf), i)
            i = j + 1
        else:
            j = i
            while j < n and not src[j].isspace() and src[j] not in '();"':
                j += 1
            yield Token("sym", src[i:j], i)
            i = j


SExpr = Union[Token, "SList"]


@dataclass(frozen=True)
class SList:
    items: tuple
    offset: int
    end: int  # offset of the closing paren


def read_all(src: str) -> list[SExpr]:
    """Read every top-level s-expression in ``src``."""
    out: list[SExpr] = []
    stack: list[tuple[int, list]] = []
    for tok in tokenize(src):
        if tok.kind == "(":
            stack.append((tok.offset, []))
        elif tok.kind == ")":
            if not stack:
                raise ParseError("unexpected ')'", src, tok.offset)
            start, items = stack.pop()
            node = SList(tuple(items), start, tok.offset)
            (stack[-1][1] if stack else out).append(node)
        else:
            (stack[-1][1] if stack else out).append(tok)
    if stack:
        raise ParseError("unexpected end of input", src, len(src), expected="')'")
    return out


def _read_one(src: str, what: str) -> SExpr:
    forms = read_all(src)
    if not forms:
        raise ParseError(f"empty input", src, len(src), expected=what)
    if len(forms) > 1:
        second = forms[1]
        raise ParseError("trailing input", src, second.offset, expected="end of input")
    return forms[0]


def _head(node: SList, src: str, what: str) -> str:
    if not node.items or not isinstance(node.items[0], Token) or node.items[0].kind != "sym":
        raise ParseError(f"expected {what} operator", src, node.offset + 1, expected=what)
    return node.items[0].text


def _arity(node: SList, n: int, src: str, head: str) -> None:
    got = len(node.items) - 1
    if got != n:
        raise ParseError(f"'{head}' takes {n} argument(s), got {got}", src, node.offset)


def term_from_sexpr(node: SExpr, src: str) -> Term:
    if isinstance(node, Token):
        if node.kind == "sym" and node.text in _LEAVES:
            return _LEAVES[node.text]
        raise ParseError(f"unknown term {node.text!r}", src, node.offset,
                         expected="x, s, t, zero, ones or '('")
    head = _head(node, src, "term")
    if head in _UNOPS:
        _arity(node, 1, src, head)
        return Unary(_UNOPS[head], term_from_sexpr(node.items[1], src))
    if head in _BINOPS:
        _arity(node, 2, src, head)
        return Binary(_BINOPS[head], term_from_sexpr(node.items[1], src),
                      term_from_sexpr(node.items[2], src))
    raise ParseError(f"unknown term operator {head!r}", src, node.items[0].offset,
                     expected="bit-vector operator")


def atom_from_sexpr(node: SExpr, src: str) -> Atom:
    if isinstance(node, Token):
        raise ParseError(f"expected an atom, got {node.text!r}", src, node.offset, expected="'('")
    head = _head(node, src, "predicate")
    if head not in _PREDS:
        raise ParseError(f"unknown predicate {head!r}", src, node.items[0].offset,
                         expected="predicate")
    _arity(node, 2, src, head)
    return Atom(_PREDS[head], term_from_sexpr(node.items[1], src),
                term_from_sexpr(node.items[2], src))


def cond_from_sexpr(node: SExpr, src: str) -> Cond:
    if isinstance(node, Token):
        if node.kind == "sym" and node.text == "true":
            return TRUE
        raise ParseError(f"unknown condition {node.text!r}", src, node.offset,
                         expected="true or '('")
    head = _head(node, src, "condition")
    if head == "not":
        _arity(node, 1, src, head)
        return Not(cond_from_sexpr(node.items[1], src))
    if head in ("and", "or"):
        if len(node.items) < 3:
            raise ParseError(f"'{head}' needs at least two arguments", src, node.offset)
        cls = And if head == "and" else Or
        args = [cond_from_sexpr(n, src) for n in node.items[1:]]
        acc = args[0]
        for a in args[1:]:
            acc = cls(acc, a)
        return acc
    return atom_from_sexpr(node, src)


def parse_term(src: str) -> Term:
    return term_from_sexpr(_read_one(src, "term"), src)


def parse_atom(src: str) -> Atom:
    return atom_from_sexpr(_read_one(src, "atom"), src)


def parse_cond(src: str) -> Cond:
    return cond_from_sexpr(_read_one(src, "condition"), src)


def print_term(e: Term) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, ConstZero):
        return "zero"
    if isinstance(e, ConstOnes):
        return "ones"
    if isinstance(e, Unary):
        return f"({e.op.value} {print_term(e.arg)})"
    if isinstance(e, Binary):
        return f"({e.op.value} {print_term(e.lhs)} {print_term(e.rhs)})"
    raise TypeError(f"not a term: {e!r}")


def print_atom(a: Atom) -> str:
    return f"({a.pred.value} {print_term(a.lhs)} {print_term(a.rhs)})"


def print_cond(c: Cond) -> str:
    if isinstance(c, Top):
        return "true"
    if isinstance(c, Atom):
        return print_atom(c)
    if isinstance(c, Not):
        return f"(not {print_cond(c.arg)})"
    if isinstance(c, And):
        return f"(and {print_cond(c.lhs)} {print_cond(c.rhs)})"
    if isinstance(c, Or):
        return f"(or {print_cond(c.lhs)} {print_cond(c.rhs)})"
    raise TypeError(f"not a condition: {c!r}")


# Catalog files.

_ENTRY_KEYS = (":name", ":literal", ":ic", ":provenance", ":witness-hints", ":expect-counterexample")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def parse_catalog(src: str) -> list:
    """Parse a catalog file into a list of :class:`~bvinvert.catalog.ICEntry`.

    Each record looks like::

        (entry :name "add-eq"
               :literal (= (bvadd x s) t)
               :ic true
               :provenance "..."
               :witness-hints ((bvsub t s)))

    ``:provenance``, ``:witness-hints`` and ``:expect-counterexample`` are
    optional.  Entry invariants (literal shape, no x in the condition) are
    checked here so diagnostics carry a position.
    """
    from .catalog import CatalogError, ICEntry

    entries = []
    seen: dict[str, int] = {}
    for form in read_all(src):
        if isinstance(form, Token) or _head(form, src, "entry") != "entry":
            raise ParseError("expected an (entry ...) record", src, form.offset, expected="(entry")
        fields: dict[str, SExpr] = {}
        items = form.items[1:]
        if len(items) % 2:
            raise ParseError("entry fields must be :key value pairs", src, form.end)
        for key, value in zip(items[::2], items[1::2]):
            if not isinstance(key, Token) or key.text not in _ENTRY_KEYS:
                raise ParseError("unknown entry field", src, key.offset,
                                 expected=", ".join(_ENTRY_KEYS))
            if key.text in fields:
                raise ParseError(f"duplicate field {key.text}", src, key.offset)
            fields[key.text] = value
        for required in (":name", ":literal", ":ic"):
            if required not in fields:
                raise ParseError(f"entry is missing {required}", src, form.offset, expected=required)

        name_tok = fields[":name"]
        if not isinstance(name_tok, Token) or name_tok.kind not in ("str", "sym"):
            raise ParseError("entry name must be a string", src, name_tok.offset)
        name = name_tok.text
        if name in seen:
            raise ParseError(f"duplicate entry name {name!r}", src, name_tok.offset)
        seen[name] = name_tok.offset

        provenance = ""
        if ":provenance" in fields:
            p = fields[":provenance"]
            if not isinstance(p, Token) or p.kind != "str":
                raise ParseError("provenance must be a string", src, p.offset, expected="string")
            provenance = p.text

        hints: list[Term] = []
        if ":witness-hints" in fields:
            h = fields[":witness-hints"]
            if not isinstance(h, SList):
                raise ParseError("witness hints must be a list", src, h.offset, expected="'('")
            hints = [term_from_sexpr(n, src) for n in h.items]

        expect_cex = False
        if ":expect-counterexample" in fields:
            e = fields[":expect-counterexample"]
            if not isinstance(e, Token) or e.text not in ("true", "false"):
                raise ParseError("expected true or false", src, e.offset, expected="true/false")
            expect_cex = e.text == "true"

        try:
            entry = ICEntry(
                name=name,
                literal=atom_from_sexpr(fields[":literal"], src),
                ic=cond_from_sexpr(fields[":ic"], src),
                provenance=provenance,
                witness_hints=tuple(hints),
                expect_counterexample=expect_cex,
            )
        except CatalogError as exc:
            raise ParseError(str(exc), src, form.offset) from None
        entries.append(entry)
    return entries


def print_entry(entry) -> str:
    lines = [
        f"(entry :name {_quote(entry.name)}",
        f"       :literal {print_atom(entry.literal)}",
        f"       :ic {print_cond(entry.ic)}",
    ]
    if entry.provenance:
        lines.append(f"       :provenance {_quote(entry.provenance)}")
    if entry.witness_hints:
        hints = " ".join(print_term(h) for h in entry.witness_hints)
        lines.append(f"       :witness-hints ({hints})")
    if entry.expect_counterexample:
        lines.append("       :expect-counterexample true")
    return "\n".join(lines) + ")"


def print_catalog(entries) -> str:
    return "\n\n".join(print_entry(e) for e in entries) + ("\n" if entries else "")
