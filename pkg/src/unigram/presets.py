"""The two shipped grammars.

``unigram-logicnli`` is the compact two-language grammar over adjective
properties: person facts, existentials, property-restricted universals, and
fact-level conditionals, plus a 24-part composite premise head for
whole-block generation.

``unigram-fol`` extends those constructions with explicit finite/open
domains (room declarations with closure axioms, quantification "in the
room" vs "anywhere"), the fuller determiner set (everyone, someone, nobody,
not everyone, not all), verb-phrase predicates from the curated lexicon,
binary-relation facts, polysyllogism chains, sentence-level negation, and
the conditional connectives only-if / unless / otherwise.  Its default
constraints forbid any conditional connective inside the scope of a
negation or of another conditional (a quantifier's restrictor arrow is
exempt).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FofSyntaxError, LexiconTooSmall
from .generator import Statement
from .grammar import (
    Grammar,
    Join,
    constraint,
    escape_literal,
    parse_grammar_file,
    realize,
    serialize_grammar,
)
from .lexicon import Lexicon, RelationEntry, default_lexicon
from .logic.ast import count_operators, parse_fof, scan_conditional_scope
from .logic.ast import symbols as formula_symbols

LOGICNLI = "unigram-logicnli"
UNIGRAM_FOL = "unigram-fol"


@dataclass(frozen=True)
class GrammarPreset:
    id: str
    grammar: Grammar
    start: str
    sentence_types: tuple
    lexicon: Lexicon
    # per-problem sub-lexicon sizes, (lo, hi) inclusive per kind
    slice_plan: dict | None = None


# --- constraints ------------------------------------------------------------


def _dummy_slots(text: str) -> str:
    """Replace residual slots with a throwaway constant so fragments parse."""
    out = []
    for i, ch in enumerate(text):
        if ch == "?" and (i + 1 >= len(text) or text[i + 1] != "["):
            out.append("slotdummy")
        else:
            out.append(ch)
    return "".join(out)


@constraint("conditional_scope")
def conditional_scope_constraint(node) -> bool:
    """Reject nodes whose TPTP realization places an implication or
    biconditional under a negation or under another conditional."""
    if node.rule is None or "tptp" not in node.rule.realizers:
        return True
    text = realize(node, "tptp")
    if "=>" not in text:  # matches <=> too
        return True
    try:
        f = parse_fof(_dummy_slots(text))
    except FofSyntaxError:
        return True  # fragment only; ancestors re-check the closed form
    return not scan_conditional_scope(f)


@constraint("chain_link")
def chain_link_constraint(node) -> bool:
    """Polysyllogism continuity: a link's antecedent equals the previous
    link's consequent, and its consequent is fresh within the chain."""
    parent = node.parent
    if parent is None:
        return True
    idx = parent.children.index(node)
    if idx == 0 or parent.children[idx - 1].type_name != node.type_name:
        return True
    prev = parent.children[idx - 1]
    if realize(node.children[0], "tptp") != realize(prev.children[1], "tptp"):
        return False
    used = set()
    for sib in parent.children[:idx]:
        if sib.type_name == node.type_name:
            used.update(realize(c, "tptp") for c in sib.children)
    return realize(node.children[1], "tptp") not in used


# --- the LogicNLI grammar ----------------------------------------------------


def build_logicnli_grammar(lexicon: Lexicon | None = None) -> GrammarPreset:
    lexicon = lexicon or default_lexicon()
    if len(lexicon.names) < 7 or len(lexicon.adjectives) < 14:
        raise LexiconTooSmall("the LogicNLI grammar needs at least 7 names and 14 adjectives")
    g = Grammar(("tptp", "eng"))
    g.add("premise(rule×16,fact×8)", Join("&\n", "(?)"), Join("\n"))
    g.add("hypothesis(person,property)", "1[?←0]", "0 is 1")
    for a in lexicon.adjectives:
        g.add("adj", escape_literal(a.symbol))
        g.add("adj", "~" + escape_literal(a.symbol), escape_literal(a.english_negated), weight=0.2)
    g.add("property(adj,adj)", "(0(?)&1(?))", "both 0 and 1")
    g.add("property(adj,adj)", "(0(?)|1(?))", "0 or 1")
    g.add("property(adj,adj)", "(0(?)<~>1(?))", "either 0 or 1", weight=0.5)
    g.add("property(adj)", "0(?)", "0")
    g.add("rule(property,property)", "![X]:(0[?←X]=>1[?←X])", "everyone who is 0 is 1")
    g.add("rule(property,property)", "![X]:(0[?←X]<=>1[?←X])", "everyone who is 0 is 1 and vice versa")
    for p in lexicon.names:
        g.add("person", escape_literal(p.symbol))
    g.add("fact(person,property)", "1[?←0]", "0 is 1")
    g.add("fact(property)", "?[X]:(0[?←X])", "someone is 0", weight=0.2)
    g.add("rule(fact,fact)", "(0)=>(1)", "if 0 then 1")
    g.add("rule(fact,fact)", "(0)<=>(1)", "if 0 then 1 and vice versa")
    g.freeze()
    return GrammarPreset(
        id=LOGICNLI,
        grammar=g,
        start="premise",
        # premise blocks run 16 rules to 8 facts; per-sentence sampling
        # keeps that 2:1 mix via list repetition
        sentence_types=("rule", "rule", "fact"),
        lexicon=lexicon,
        slice_plan={"names": (7, 7), "adjectives": (14, 14), "predicates": (0, 0), "relations": (0, 0)},
    )


# --- the extended FOL grammar -------------------------------------------------


def build_unigram_fol_grammar(lexicon: Lexicon | None = None) -> GrammarPreset:
    lexicon = lexicon or default_lexicon()
    if len(lexicon.names) < 2 or len(lexicon.adjectives) < 5 or len(lexicon.predicates) < 2:
        raise LexiconTooSmall("the FOL grammar needs at least 2 names, 5 adjectives and 2 predicates")
    g = Grammar(("tptp", "eng"), default_constraints=("distinct_siblings", "conditional_scope"))

    for p in lexicon.names:
        g.add("person", escape_literal(p.symbol), escape_literal(p.english))
    for a in lexicon.adjectives:
        g.add("adj", escape_literal(a.symbol), escape_literal(a.english))
        g.add("adj", "~" + escape_literal(a.symbol), escape_literal(a.english_negated), weight=0.2)
        g.add("adjpos", escape_literal(a.symbol), escape_literal(a.english))
    for p in lexicon.predicates:
        g.add("vp", escape_literal(p.symbol), escape_literal(p.english))
        g.add("vp", "~" + escape_literal(p.symbol), escape_literal(p.english_negated), weight=0.2)

    # predicate phrases; the English side carries its own copula
    g.add("pp(adj)", "0(?)", "is 0")
    g.add("pp(vp)", "0(?)", "0")
    g.add("pp(adj,adj)", "(0(?)&1(?))", "is both 0 and 1", weight=0.35)
    g.add("pp(adj,adj)", "(0(?)|1(?))", "is 0 or 1", weight=0.35)
    g.add("pp(adj,adj)", "(0(?)<~>1(?))", "is either 0 or 1", weight=0.25)
    g.add("pp(vp,vp)", "(0(?)&1(?))", "0 and 1", weight=0.3)
    g.add("pp(vp,vp)", "(0(?)|1(?))", "0 or 1", weight=0.3)
    g.add("pp(vp,vp)", "(0(?)<~>1(?))", "either 0 or 1", weight=0.2)
    g.add("pp(adj,vp)", "(0(?)&1(?))", "is 0 and 1", weight=0.2)
    g.add("pp(vp,adj)", "(0(?)&1(?))", "0 and is 1", weight=0.2)

    g.add("fact(person,pp)", "1[?←0]", "0 1")
    for r in lexicon.relations:
        g.add("relfact(person,person)", f"{escape_literal(r.symbol)}(0,1)", f"0 {escape_literal(r.english)} 1")
        g.add(
            "relfact(person,person)",
            f"~{escape_literal(r.symbol)}(0,1)",
            f"0 {escape_literal(r.english_negated)} 1",
            weight=0.2,
        )

    # property-restricted universals (open domain)
    g.add("rule(pp,pp)", "![X]:(0[?←X]=>1[?←X])", "everyone who 0 1")
    g.add("rule(pp,pp)", "![X]:(0[?←X]<=>1[?←X])", "everyone who 0 1 and vice versa", weight=0.5)

    # determiners over the room domain and the open domain
    g.add("qsent(pp)", "![X]:(room(X)=>0[?←X])", "everyone in the room 0")
    g.add("qsent(pp)", "![X]:(0[?←X])", "everyone anywhere 0", weight=0.7)
    g.add("qsent(pp)", "?[X]:(room(X)&0[?←X])", "someone in the room 0", weight=0.7)
    g.add("qsent(pp)", "?[X]:(0[?←X])", "someone anywhere 0", weight=0.5)
    g.add("qsent(pp)", "~?[X]:(room(X)&0[?←X])", "nobody in the room 0", weight=0.6)
    g.add("qsent(pp)", "~?[X]:(0[?←X])", "nobody anywhere 0", weight=0.4)
    g.add("qsent(pp)", "~![X]:(room(X)=>0[?←X])", "not everyone in the room 0", weight=0.4)
    g.add("qsent(pp)", "~![X]:(0[?←X])", "not everyone anywhere 0", weight=0.3)
    g.add("qsent(pp)", "~![X]:(room(X)=>0[?←X])", "not every person in the room 0", weight=0.25)
    g.add("qsent(pp)", "~![X]:(0[?←X])", "not every person anywhere 0", weight=0.2)

    # room declarations: closure axiom plus membership facts
    g.add("roomdecl(person)", "![X]:(room(X)=>(X=0))&room(0)", "0 is the only person in the room", weight=0.4)
    g.add(
        "roomdecl(person,person)",
        "![X]:(room(X)=>(X=0|X=1))&room(0)&room(1)",
        "0, and 1 are the only persons in the room",
    )
    g.add(
        "roomdecl(person,person,person)",
        "![X]:(room(X)=>(X=0|X=1|X=2))&room(0)&room(1)&room(2)",
        "0, 1, and 2 are the only persons in the room",
        weight=0.5,
    )
    g.add(
        "roomdecl(person×4)",
        "![X]:(room(X)=>(X=0|X=1|X=2|X=3))&room(0)&room(1)&room(2)&room(3)",
        "0, 1, 2, and 3 are the only persons in the room",
        weight=0.25,
    )

    # polysyllogism chains, context-sensitive via the chain_link constraint
    g.add("clink(adjpos,adjpos)", "![X]:(0(X)=>1(X))", "all 0 are 1", constraints=("chain_link",))
    g.add("chain(clink,clink)", "((0)&(1))", "0, and 1")
    g.add("chain(clink,clink,clink)", "((0)&(1)&(2))", "0, 1, and 2", weight=0.5)
    g.add("chain(clink,clink,clink,clink)", "((0)&(1)&(2)&(3))", "0, 1, 2, and 3", weight=0.25)

    # embeddable statements; conditionals may be drawn here and are then
    # pruned by the conditional_scope constraint, mirroring the generate-
    # then-reject treatment of material conditionals
    g.add("stmt(fact)", "0", "0")
    g.add("stmt(relfact)", "0", "0", weight=0.4)
    g.add("stmt(qsent)", "0", "0", weight=0.8)
    g.add("stmt(rule)", "0", "0", weight=0.3)
    g.add("stmt(conditional)", "0", "0", weight=0.25)

    g.add("conditional(stmt,stmt)", "(0)=>(1)", "if 0 then 1")
    g.add("conditional(stmt,stmt)", "(0)<=>(1)", "if 0 then 1 and vice versa", weight=0.4)
    g.add("conditional(stmt,stmt)", "(0)=>(1)", "0 only if 1", weight=0.5)
    g.add("conditional(stmt,stmt)", "(~1)=>(0)", "0 unless 1", weight=0.5)
    g.add("negation(stmt)", "~(0)", "it is not the case that 0")
    g.add("ifotherwise(stmt,stmt,stmt)", "((0)=>(1))&((~(0))=>(2))", "if 0 then 1 otherwise 2")

    # top-level sentence mix
    g.add("sentence(fact)", "0", "0", weight=1.2)
    g.add("sentence(relfact)", "0", "0", weight=0.35)
    g.add("sentence(rule)", "0", "0", weight=0.9)
    g.add("sentence(qsent)", "0", "0", weight=1.0)
    g.add("sentence(chain)", "0", "0", weight=0.3)
    g.add("sentence(conditional)", "0", "0", weight=0.9)
    g.add("sentence(negation)", "0", "0", weight=0.3)
    g.add("sentence(ifotherwise)", "0", "0", weight=0.2)
    g.add("sentence(roomdecl)", "0", "0", weight=0.3)
    g.freeze()
    return GrammarPreset(
        id=UNIGRAM_FOL,
        grammar=g,
        start="sentence",
        sentence_types=("sentence",),
        lexicon=lexicon,
        slice_plan={"names": (3, 5), "adjectives": (6, 9), "predicates": (3, 6), "relations": (0, 2)},
    )


def symmetry_axiom_statement(relation: RelationEntry) -> Statement:
    """The symmetry axiom appended once when a symmetric relation first
    appears in a problem; it occupies a premise slot like any sentence."""
    tptp = f"![X,Y]:({relation.symbol}(X,Y)=>{relation.symbol}(Y,X))"
    eng = f"if one person {relation.english} another then the other {relation.english} them too"
    return Statement(
        realizations={"tptp": tptp, "eng": eng},
        symbols=frozenset(formula_symbols(parse_fof(tptp))),
        op_counts=count_operators(tptp),
        start="axiom",
    )


PRESET_BUILDERS = {
    LOGICNLI: build_logicnli_grammar,
    UNIGRAM_FOL: build_unigram_fol_grammar,
}


def build_preset(preset_id: str, lexicon: Lexicon | None = None) -> GrammarPreset:
    try:
        builder = PRESET_BUILDERS[preset_id]
    except KeyError:
        raise KeyError(f"unknown grammar preset {preset_id!r}; known: {sorted(PRESET_BUILDERS)}") from None
    return builder(lexicon)


def preset_meta(preset: GrammarPreset) -> dict:
    return {"start": preset.start, "sentence_types": list(preset.sentence_types)}


def serialize_preset(preset: GrammarPreset) -> str:
    return serialize_grammar(preset.grammar, preset_meta(preset))


def load_preset_file(text: str, preset_id: str, lexicon: Lexicon | None = None) -> GrammarPreset:
    grammar, meta = parse_grammar_file(text)
    return GrammarPreset(
        id=preset_id,
        grammar=grammar,
        start=meta.get("start", "sentence"),
        sentence_types=tuple(meta.get("sentence_types", ())),
        lexicon=lexicon or default_lexicon(),
    )
