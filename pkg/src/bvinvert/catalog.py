"""Registry of invertibility-equivalence claims."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Union

from .terms import Atom, Cond, Term, check_literal_shape, vars_of


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class ICEntry:
    """One claim ``ic[s,t] <=> exists x. literal[x,s,t]``.

    ``witness_hints`` are candidate terms over s and t to try for x; they are
    not checked for soundness here.  ``expect_counterexample`` marks entries
    known to be wrong, so a counterexample on them does not fail a run.
    """

    name: str
    literal: Atom
    ic: Cond
    provenance: str = ""
    witness_hints: tuple[Term, ...] = ()
    expect_counterexample: bool = False

    def __post_init__(self):
        if not self.name:
            raise CatalogError("entry name must be non-empty")
        reason = check_literal_shape(self.literal)
        if reason is not None:
            raise CatalogError(f"entry {self.name!r}: bad literal: {reason}")
        if not vars_of(self.ic) <= {"s", "t"}:
            raise CatalogError(f"entry {self.name!r}: condition may only mention s and t")
        object.__setattr__(self, "witness_hints", tuple(self.witness_hints))
        for h in self.witness_hints:
            if not vars_of(h) <= {"s", "t"}:
                raise CatalogError(f"entry {self.name!r}: witness hints may only mention s and t")


@dataclass(frozen=True)
class Catalog:
    entries: tuple[ICEntry, ...] = ()
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        for i, e in enumerate(self.entries):
            if e.name in self._index:
                raise CatalogError(f"duplicate entry name {e.name!r}")
            self._index[e.name] = i

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ICEntry]:
        return iter(self.entries)

    def __getitem__(self, name: str) -> ICEntry:
        return self.entries[self._index[name]]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.entries]


def load(catalog: Catalog, entries: Iterable[ICEntry]) -> Catalog:
    """Return a new catalog with ``entries`` appended."""
    return Catalog(catalog.entries + tuple(entries))


def seed_text() -> str:
    return resources.files("bvinvert").joinpath("data/seed.ic").read_text(encoding="utf-8")


def seed_catalog() -> Catalog:
    from .syntax import parse_catalog

    return Catalog(parse_catalog(seed_text()))


def read_catalog_file(path: Union[str, Path]) -> list[ICEntry]:
    from .syntax import parse_catalog

    return parse_catalog(Path(path).read_text(encoding="utf-8"))
