"""The shipped lexicon: person names, adjectives, verb-phrase predicates,
and binary relations, with per-entry English negations and TPTP symbols.

File format: UTF-8, one record per line, tab-separated fields
(english_positive, english_negated, tptp_symbol, kind, symmetric_flag),
``#`` starts a comment line.  The predicate list is curated so that no two
entries entail or contradict each other; "room" is reserved for the domain
predicate and may not appear as a symbol.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import LexiconFileError
from .rng import Rng

_SYMBOL_RE = re.compile(r"[a-z][a-z0-9_]*")
RESERVED_SYMBOLS = frozenset({"room"})


@dataclass(frozen=True, slots=True)
class NameEntry:
    english: str
    symbol: str


@dataclass(frozen=True, slots=True)
class PredicateEntry:
    english: str
    english_negated: str
    symbol: str


@dataclass(frozen=True, slots=True)
class RelationEntry:
    english: str
    english_negated: str
    symbol: str
    symmetric: bool


@dataclass(frozen=True)
class Lexicon:
    names: tuple
    adjectives: tuple
    predicates: tuple
    relations: tuple

    def validate(self) -> "Lexicon":
        symbols = (
            [n.symbol for n in self.names]
            + [a.symbol for a in self.adjectives]
            + [p.symbol for p in self.predicates]
            + [r.symbol for r in self.relations]
        )
        seen = set()
        for s in symbols:
            if not _SYMBOL_RE.fullmatch(s):
                raise LexiconFileError(f"symbol {s!r} is not a valid FOF functor")
            if s in RESERVED_SYMBOLS:
                raise LexiconFileError(f"symbol {s!r} is reserved")
            if s in seen:
                raise LexiconFileError(f"duplicate symbol {s!r}")
            seen.add(s)
        for entry in self.adjectives + self.predicates + self.relations:
            if not entry.english_negated:
                raise LexiconFileError(f"entry {entry.symbol!r} lacks a negated form")
        return self

    def slice(self, rng: Rng, n_names: int, n_adjectives: int, n_predicates: int, n_relations: int) -> "Lexicon":
        """A per-problem sub-lexicon drawn without replacement.

        Concentrating each problem on a few symbols is what makes premises
        interlock: hypothesis symbol coverage becomes reachable and proofs
        can involve several premises."""
        return Lexicon(
            names=tuple(rng.sample(self.names, min(n_names, len(self.names)))),
            adjectives=tuple(rng.sample(self.adjectives, min(n_adjectives, len(self.adjectives)))),
            predicates=tuple(rng.sample(self.predicates, min(n_predicates, len(self.predicates)))),
            relations=tuple(rng.sample(self.relations, min(n_relations, len(self.relations)))),
        )


def parse_lexicon(text: str) -> Lexicon:
    names, adjectives, predicates, relations = [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise LexiconFileError(f"line {lineno}: expected 5 tab-separated fields")
        pos, neg, symbol, kind, flag = fields
        if kind == "name":
            names.append(NameEntry(pos, symbol))
        elif kind == "adj":
            adjectives.append(PredicateEntry(pos, neg, symbol))
        elif kind == "predicate":
            predicates.append(PredicateEntry(pos, neg, symbol))
        elif kind == "relation":
            relations.append(RelationEntry(pos, neg, symbol, flag == "yes"))
        else:
            raise LexiconFileError(f"line {lineno}: unknown kind {kind!r}")
    return Lexicon(tuple(names), tuple(adjectives), tuple(predicates), tuple(relations)).validate()


def serialize_lexicon(lex: Lexicon) -> str:
    lines = ["# english_positive\tenglish_negated\ttptp_symbol\tkind\tsymmetric_flag"]
    for n in lex.names:
        lines.append(f"{n.english}\t\t{n.symbol}\tname\t")
    for a in lex.adjectives:
        lines.append(f"{a.english}\t{a.english_negated}\t{a.symbol}\tadj\t")
    for p in lex.predicates:
        lines.append(f"{p.english}\t{p.english_negated}\t{p.symbol}\tpredicate\t")
    for r in lex.relations:
        flag = "yes" if r.symmetric else "no"
        lines.append(f"{r.english}\t{r.english_negated}\t{r.symbol}\trelation\t{flag}")
    return "\n".join(lines) + "\n"


def load_lexicon(path=None) -> Lexicon:
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return parse_lexicon(fh.read())
    return parse_lexicon(resources.files("unigram.data").joinpath("lexicon.tsv").read_text("utf-8"))


_default: Lexicon | None = None


def default_lexicon() -> Lexicon:
    global _default
    if _default is None:
        _default = load_lexicon()
    return _default
