"""Depth-first, leftmost-nonterminal derivation-tree generation.

Each nonterminal is expanded by sampling a producing rule with probability
proportional to its weight.  Children are expanded strictly left to right,
so a node's constraints always see a fully realized left context.  When a
node's constraints fail, that node is resampled up to
``max_retries_per_node``; exhausting the retries backtracks to the parent,
which counts against a global ``max_backtracks`` budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DepthExceeded,
    GenerationExhausted,
    NoProducingRule,
    ResidualSlot,
)
from .grammar import DerivationTree, Grammar, Rule, check_constraints, realize, residual_slot
from .logic.ast import count_operators, parse_fof
from .logic.ast import symbols as formula_symbols
from .rng import Rng


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_retries_per_node: int = 64
    max_backtracks: int = 256
    max_depth: int = 32

    def __post_init__(self):
        for name in ("max_retries_per_node", "max_backtracks", "max_depth"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


def sample_rule(grammar: Grammar, type_name: str, rng: Rng) -> Rule:
    """Weighted random choice among the rules producing ``type_name``."""
    rules = grammar.producing(type_name)
    if not rules:
        raise NoProducingRule(f"no rule produces type {type_name!r}")
    if len(rules) == 1:
        return rules[0]
    return rng.weighted_choice(rules, [r.weight for r in rules])


class _Backtrack(Exception):
    pass


def _node_path(node: DerivationTree) -> tuple[int, ...]:
    path = []
    while node.parent is not None:
        path.append(node.parent.children.index(node))
        node = node.parent
    return tuple(reversed(path))


def generate(
    grammar: Grammar,
    start: str,
    config: GenConfig,
    rng: Rng | None = None,
    trace: list | None = None,
) -> DerivationTree:
    """Fully expand a derivation tree whose root type is ``start``.

    Deterministic in (grammar, start, seed); pass ``rng`` to draw from an
    existing stream instead of ``config.seed``.  ``trace``, when given,
    receives one event tuple per expansion step.
    """
    if rng is None:
        rng = Rng(config.seed)
    budget = [config.max_backtracks]

    def expand(type_name: str, parent, depth: int) -> DerivationTree:
        if depth > config.max_depth:
            raise DepthExceeded(f"expansion deeper than {config.max_depth}")
        node = DerivationTree(type_name, parent=parent)
        if parent is not None:
            parent.children.append(node)
        if trace is not None:
            trace.append(("expand", _node_path(node), type_name))
        for _attempt in range(config.max_retries_per_node):
            rule = sample_rule(grammar, type_name, rng)
            node.rule = rule
            node.children.clear()
            node.memo.clear()
            if trace is not None:
                trace.append(("rule", _node_path(node), str(rule.signature)))
            try:
                for child_type in rule.signature.inputs:
                    expand(child_type, node, depth + 1)
            except _Backtrack:
                budget[0] -= 1
                if trace is not None:
                    trace.append(("backtrack", _node_path(node), budget[0]))
                if budget[0] < 0:
                    raise GenerationExhausted(
                        f"backtrack budget of {config.max_backtracks} spent"
                    ) from None
                continue
            ok, violated = check_constraints(node, grammar)
            if trace is not None:
                trace.append(("constraint", _node_path(node), ok, violated))
            if ok:
                return node
        if parent is not None:
            parent.children.pop()
        raise _Backtrack()

    try:
        return expand(start, None, 0)
    except _Backtrack:
        raise GenerationExhausted(
            f"could not expand {start!r} within {config.max_retries_per_node} retries"
        ) from None


@dataclass(frozen=True)
class Statement:
    """One generated sentence: per-language surface forms plus the symbol
    set and logical-operator counts extracted from the TPTP side."""

    realizations: dict
    symbols: frozenset
    op_counts: dict
    start: str

    @property
    def tptp(self) -> str:
        return self.realizations["tptp"]

    @property
    def eng(self) -> str:
        return self.realizations["eng"]


def statement_from_tree(grammar: Grammar, tree: DerivationTree, start: str) -> Statement:
    realizations = {}
    for lang in grammar.languages:
        text = realize(tree, lang)
        if residual_slot(text):
            raise ResidualSlot(f"unsubstituted slot in {lang} realization: {text!r}")
        realizations[lang] = text
    if "tptp" in realizations:
        tptp = realizations["tptp"]
        syms = frozenset(formula_symbols(parse_fof(tptp)))
        ops = count_operators(tptp)
    else:
        syms = frozenset()
        ops = {}
    return Statement(realizations=realizations, symbols=syms, op_counts=ops, start=start)


def generate_statement(
    grammar: Grammar,
    start: str,
    config: GenConfig,
    rng: Rng | None = None,
    trace: list | None = None,
) -> Statement:
    tree = generate(grammar, start, config, rng=rng, trace=trace)
    return statement_from_tree(grammar, tree, start)
