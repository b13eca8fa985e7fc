"""First-order formula ASTs and the TPTP FOF surface syntax.

The connective inventory is predicate application, equality, ~, &, |, =>,
<=>, <~> and the two quantifiers.  ``<~>`` is kept as a distinct node so the
printer can reproduce it verbatim and operator statistics can count it; the
satisfiability code treats it as sugar for ``~(a <=> b)``.

Terms are variables (uppercase initial) or constants (lowercase initial);
there are no function symbols.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import FofSyntaxError

# --- terms ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Const:
    name: str


Term = Var | Const

# --- formulas -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Pred:
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True, slots=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    items: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Or:
    items: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Xor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


Formula = Pred | Eq | Not | And | Or | Implies | Iff | Xor | Forall | Exists


@dataclass(frozen=True, slots=True)
class FofUnit:
    name: str
    role: str
    formula: Formula


# --- lexer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<iff><=>)
  | (?P<xor><~>)
  | (?P<implies>=>)
  | (?P<neq>!=)
  | (?P<forall>!)
  | (?P<exists>\?)
  | (?P<eq>=)
  | (?P<not>~)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<lbrack>\[)
  | (?P<rbrack>\])
  | (?P<colon>:)
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

OPERATOR_KEYS = ("forall", "exists", "not", "and", "or", "implies", "iff", "xor", "eq")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """(kind, value, byte offset) triples; raises on unknown characters."""
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FofSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", n))
    return out


def count_operators(text: str) -> dict[str, int]:
    """Unigram counts of the logical operator tokens in a TPTP string.

    ``!=`` contributes to both ``not`` and ``eq``.
    """
    counts = dict.fromkeys(OPERATOR_KEYS, 0)
    for kind, _, _ in tokenize(text):
        if kind in counts:
            counts[kind] += 1
        elif kind == "neq":
            counts["not"] += 1
            counts["eq"] += 1
    return counts


# --- parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, tokens, text):
        self.toks = tokens
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise FofSyntaxError(f"expected {kind}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    # formula := unitary (binary tail)?
    def formula(self, bound):
        first = self.unitary(bound)
        kind, _, off = self.peek()
        if kind in ("and", "or"):
            items = [first]
            op = kind
            while self.peek()[0] == op:
                self.take(op)
                items.append(self.unitary(bound))
            nxt = self.peek()
            if nxt[0] in ("and", "or", "implies", "iff", "xor"):
                raise FofSyntaxError("ambiguous mix of binary connectives needs parentheses", nxt[2])
            return And(tuple(items)) if op == "and" else Or(tuple(items))
        if kind in ("implies", "iff", "xor"):
            self.take(kind)
            right = self.unitary(bound)
            nxt = self.peek()
            if nxt[0] in ("and", "or", "implies", "iff", "xor"):
                raise FofSyntaxError("ambiguous mix of binary connectives needs parentheses", nxt[2])
            cls = {"implies": Implies, "iff": Iff, "xor": Xor}[kind]
            return cls(first, right)
        return first

    def unitary(self, bound):
        kind, value, off = self.peek()
        if kind == "not":
            self.take()
            return Not(self.unitary(bound))
        if kind in ("forall", "exists"):
            self.take()
            self.take("lbrack")
            names = [self.take("var")]
            while self.peek()[0] == "comma":
                self.take()
                names.append(self.take("var"))
            self.take("rbrack")
            self.take("colon")
            for _, name, noff in names:
                if name in bound:
                    raise FofSyntaxError(f"variable {name} bound twice", noff)
            inner_bound = bound | {name for _, name, _ in names}
            body = self.unitary(inner_bound)
            cls = Forall if kind == "forall" else Exists
            for _, name, _ in reversed(names):
                body = cls(name, body)
            return body
        if kind == "lpar":
            self.take()
            f = self.formula(bound)
            self.take("rpar")
            return f
        return self.atom(bound)

    def term(self, bound):
        kind, value, off = self.peek()
        if kind == "var":
            self.take()
            if value not in bound:
                raise FofSyntaxError(f"unbound variable {value}", off)
            return Var(value)
        if kind == "name":
            self.take()
            return Const(value)
        raise FofSyntaxError(f"expected a term, found {value or 'end of input'!r}", off)

    def atom(self, bound):
        kind, value, off = self.peek()
        if kind == "var":
            left = self.term(bound)
        elif kind == "name":
            self.take()
            if self.peek()[0] == "lpar":
                self.take()
                args = [self.term(bound)]
                while self.peek()[0] == "comma":
                    self.take()
                    args.append(self.term(bound))
                self.take("rpar")
                return Pred(value, tuple(args))
            if self.peek()[0] in ("eq", "neq"):
                left = Const(value)
            else:
                return Pred(value, ())
        else:
            raise FofSyntaxError(f"expected a formula, found {value or 'end of input'!r}", off)
        opkind, _, opoff = self.peek()
        if opkind not in ("eq", "neq"):
            raise FofSyntaxError("a bare term is not a formula", opoff)
        self.take()
        right = self.term(bound)
        eq = Eq(left, right)
        return Not(eq) if opkind == "neq" else eq


def parse_fof(text: str) -> Formula:
    """Parse one bare TPTP FOF formula, or one ``fof(name, role, f).`` unit."""
    toks = tokenize(text)
    p = _Parser(toks, text)
    kind, value, _ = p.peek()
    if kind == "name" and value == "fof" and p.toks[p.i + 1][0] == "lpar":
        return parse_fof_units(text)[0].formula
    f = p.formula(frozenset())
    p.take("eof")
    return f


def parse_fof_units(text: str) -> list[FofUnit]:
    """Parse a whole TPTP file of fof units."""
    toks = tokenize(text)
    p = _Parser(toks, text)
    units = []
    while p.peek()[0] != "eof":
        kw = p.take("name")
        if kw[1] != "fof":
            raise FofSyntaxError(f"expected 'fof', found {kw[1]!r}", kw[2])
        p.take("lpar")
        name = p.take("name")[1]
        p.take("comma")
        role = p.take("name")[1]
        p.take("comma")
        f = p.formula(frozenset())
        p.take("rpar")
        p.take("dot")
        units.append(FofUnit(name, role, f))
    return units


# --- printer --------------------------------------------------------------


def _term_str(t: Term) -> str:
    return t.name


def to_tptp(f: Formula) -> str:
    """Render a formula in TPTP syntax; reparsing yields an equal AST."""
    if isinstance(f, Pred):
        if not f.args:
            return f.name
        return f.name + "(" + ",".join(_term_str(a) for a in f.args) + ")"
    if isinstance(f, Eq):
        return _term_str(f.left) + "=" + _term_str(f.right)
    if isinstance(f, Not):
        return "~(" + to_tptp(f.body) + ")"
    if isinstance(f, And):
        return "&".join("(" + to_tptp(i) + ")" for i in f.items)
    if isinstance(f, Or):
        return "|".join("(" + to_tptp(i) + ")" for i in f.items)
    if isinstance(f, Implies):
        return "(" + to_tptp(f.left) + ")=>(" + to_tptp(f.right) + ")"
    if isinstance(f, Iff):
        return "(" + to_tptp(f.left) + ")<=>(" + to_tptp(f.right) + ")"
    if isinstance(f, Xor):
        return "(" + to_tptp(f.left) + ")<~>(" + to_tptp(f.right) + ")"
    if isinstance(f, Forall):
        return "![" + f.var + "]:(" + to_tptp(f.body) + ")"
    if isinstance(f, Exists):
        return "?[" + f.var + "]:(" + to_tptp(f.body) + ")"
    raise TypeError(f"not a formula: {f!r}")


# --- structural helpers ---------------------------------------------------


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.body,)
    if isinstance(f, (And, Or)):
        return f.items
    if isinstance(f, (Implies, Iff, Xor)):
        return (f.left, f.right)
    if isinstance(f, (Forall, Exists)):
        return (f.body,)
    return ()


def walk(f: Formula):
    yield f
    for c in children(f):
        yield from walk(c)


def free_vars(f: Formula, bound: frozenset = frozenset()) -> set[str]:
    if isinstance(f, Pred):
        return {a.name for a in f.args if isinstance(a, Var) and a.name not in bound}
    if isinstance(f, Eq):
        return {t.name for t in (f.left, f.right) if isinstance(t, Var) and t.name not in bound}
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body, bound | {f.var})
    out: set[str] = set()
    for c in children(f):
        out |= free_vars(c, bound)
    return out


def is_closed(f: Formula) -> bool:
    return not free_vars(f)


def predicates(f: Formula) -> set[tuple[str, int]]:
    return {(g.name, len(g.args)) for g in walk(f) if isinstance(g, Pred)}


def constants(f: Formula) -> set[str]:
    out = set()
    for g in walk(f):
        if isinstance(g, Pred):
            out |= {a.name for a in g.args if isinstance(a, Const)}
        elif isinstance(g, Eq):
            out |= {t.name for t in (g.left, g.right) if isinstance(t, Const)}
    return out


def symbols(f: Formula) -> set[str]:
    """Predicate and constant names occurring in the formula."""
    return {name for name, _ in predicates(f)} | constants(f)


def scan_conditional_scope(f: Formula) -> list[Formula]:
    """Conditional connectives sitting in the scope of a negation or of
    another conditional.

    An ``=>``/``<=>`` that is the immediate body of a quantifier is treated
    as the quantifier's restrictor and never flagged.
    """
    bad: list[Formula] = []

    def rec(node, dominated, parent_quant):
        trigger = dominated
        if isinstance(node, (Implies, Iff)):
            if dominated and not parent_quant:
                bad.append(node)
            trigger = True
        elif isinstance(node, Not):
            trigger = True
        for c in children(node):
            rec(c, trigger, isinstance(node, (Forall, Exists)))

    rec(f, False, False)
    return bad


def scan_duplicate_siblings(f: Formula) -> list[Formula]:
    """Nodes whose immediate operands contain two structurally equal
    subformulas, plus predicate/equality atoms with repeated arguments."""
    bad = []
    for g in walk(f):
        if isinstance(g, (And, Or)):
            if len(set(g.items)) < len(g.items):
                bad.append(g)
        elif isinstance(g, (Implies, Iff, Xor)):
            if g.left == g.right:
                bad.append(g)
        elif isinstance(g, Pred):
            if len(g.args) >= 2 and len(set(g.args)) < len(g.args):
                bad.append(g)
        elif isinstance(g, Eq):
            if g.left == g.right:
                bad.append(g)
    return bad


# --- fof emission ----------------------------------------------------------


def emit_problem(premises: list[str], hypothesis: str | None) -> str:
    """One axiom unit per premise plus an optional conjecture unit.

    Formula arguments are TPTP strings and are embedded verbatim, so xor and
    any other surface choices survive byte-for-byte.
    """
    lines = [f"fof(premise_{i}, axiom, {p})." for i, p in enumerate(premises)]
    if hypothesis is not None:
        lines.append(f"fof(hypothesis, conjecture, {hypothesis}).")
    return "\n".join(lines) + "\n"


def emit_axioms(formulas: list[str]) -> str:
    """Every formula as an axiom unit; used for raw satisfiability calls."""
    lines = [f"fof(axiom_{i}, axiom, {f})." for i, f in enumerate(formulas)]
    return "\n".join(lines) + "\n"
