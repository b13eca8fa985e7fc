"""Typed production rules binding one template per concrete language.

A rule declares a signature like ``fact(person,property)`` plus one realizer
template per registered language.  Templates are written in a tiny token
language:

* a digit (or ``{k}`` for indices past 9) splices child k's realization,
* ``?`` is the reserved slot character, left in place until a parent
  substitutes it,
* ``[?←X]`` directly after a child reference rewrites every slot in that
  child's realized string to the literal ``X``; ``[?←2]`` rewrites slots to
  child 2's realization,
* ``\\0``..``\\9``, ``\\?``, ``\\{``, ``\\[`` and ``\\\\`` escape characters
  that would otherwise be structural.

Rules with more children than single digits can address (for example a
24-part premise block) use a join template: a per-language separator plus an
item wrapper in which ``?`` marks each child's realization.

Grammars also carry named constraints: predicates over a derivation node
(with access to the whole tree through parent links) that the generator
re-samples against.  The ``distinct_siblings`` constraint, on by default,
rejects nodes whose same-typed children realize identically in any language.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DanglingSubstitution,
    GrammarFileError,
    MalformedSignature,
    MissingRealizer,
    OpenGrammar,
    UnexpandedLeaf,
    UnknownLanguage,
)

# --- signatures -------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Signature:
    output: str
    inputs: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.inputs)


_NAME_BAD = set("(),;×\"\n\t ")


def _valid_type_name(name: str) -> bool:
    return bool(name) and not (set(name) & _NAME_BAD)


def parse_signature(spec: str) -> Signature:
    """``name`` or ``name(t1,...,tn)``; ``t×k`` repeats a type k times."""
    spec = spec.strip()
    if "(" not in spec:
        if spec.endswith(")"):
            raise MalformedSignature(f"unbalanced parentheses in {spec!r}")
        if not _valid_type_name(spec):
            raise MalformedSignature(f"bad type name {spec!r}")
        return Signature(spec, ())
    head, _, rest = spec.partition("(")
    head = head.strip()
    if not rest.endswith(")") or "(" in rest[:-1] or ")" in rest[:-1]:
        raise MalformedSignature(f"unbalanced parentheses in {spec!r}")
    if not _valid_type_name(head):
        raise MalformedSignature(f"bad type name {head!r}")
    inputs: list[str] = []
    body = rest[:-1].strip()
    if body:
        for part in body.split(","):
            part = part.strip()
            if "×" in part:
                name, _, count = part.partition("×")
                name = name.strip()
                try:
                    k = int(count.strip())
                except ValueError:
                    raise MalformedSignature(f"bad repetition count in {part!r}") from None
                if k < 1:
                    raise MalformedSignature(f"repetition count must be positive in {part!r}")
            else:
                name, k = part, 1
            if not _valid_type_name(name):
                raise MalformedSignature(f"bad type name {name!r} in {spec!r}")
            inputs.extend([name] * k)
    return Signature(head, tuple(inputs))


# --- templates --------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Lit:
    text: str


@dataclass(frozen=True, slots=True)
class Slot:
    pass


@dataclass(frozen=True, slots=True)
class Ref:
    index: int
    subst: tuple | None = None  # ("lit", text) | ("child", k)


@dataclass(frozen=True, slots=True)
class Template:
    tokens: tuple


@dataclass(frozen=True, slots=True)
class Join:
    separator: str
    item: str = "?"


Realizer = Template | Join

_ESCAPABLE = "0123456789?{[\\"


def parse_template(src: str) -> Template:
    tokens: list = []
    lit: list[str] = []

    def flush():
        if lit:
            tokens.append(Lit("".join(lit)))
            lit.clear()

    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\\" and i + 1 < n and src[i + 1] in _ESCAPABLE:
            lit.append(src[i + 1])
            i += 2
            continue
        if ch.isdigit():
            flush()
            tokens.append(Ref(int(ch)))
            i += 1
            continue
        if ch == "{":
            end = src.find("}", i)
            inner = src[i + 1 : end] if end != -1 else ""
            if end != -1 and inner.isdigit():
                flush()
                tokens.append(Ref(int(inner)))
                i = end + 1
                continue
            lit.append(ch)
            i += 1
            continue
        if ch == "[" and src.startswith("[?←", i):
            end = src.find("]", i)
            if end == -1:
                raise DanglingSubstitution(f"unterminated substitution in {src!r}")
            target = src[i + 3 : end]
            if not tokens or not isinstance(tokens[-1], Ref) or lit:
                raise DanglingSubstitution(f"substitution without a child reference in {src!r}")
            if tokens[-1].subst is not None:
                raise DanglingSubstitution(f"second substitution on one child reference in {src!r}")
            subst = ("child", int(target)) if target.isdigit() else ("lit", target)
            tokens[-1] = Ref(tokens[-1].index, subst)
            i = end + 1
            continue
        if ch == "?":
            flush()
            tokens.append(Slot())
            i += 1
            continue
        lit.append(ch)
        i += 1
    flush()
    return Template(tuple(tokens))


def escape_literal(text: str) -> str:
    """Escape text so parse_template treats it as one literal token."""
    text = text.replace("\\", "\\\\")
    for ch in "0123456789?{":
        text = text.replace(ch, "\\" + ch)
    return text.replace("[?←", "\\[?←")


def print_template(tpl: Template) -> str:
    out: list[str] = []
    for tok in tpl.tokens:
        if isinstance(tok, Lit):
            out.append(escape_literal(tok.text))
        elif isinstance(tok, Slot):
            out.append("?")
        elif isinstance(tok, Ref):
            out.append(str(tok.index) if tok.index <= 9 else "{%d}" % tok.index)
            if tok.subst is not None:
                kind, val = tok.subst
                out.append(f"[?←{val}]")
    return "".join(out)


# --- rules and grammars -----------------------------------------------------


@dataclass(frozen=True, slots=True)
class Rule:
    signature: Signature
    realizers: dict  # language -> Template | Join
    weight: float = 1.0
    constraints: tuple[str, ...] = ()

    @property
    def output(self) -> str:
        return self.signature.output


CONSTRAINTS: dict = {}


def constraint(name: str):
    def deco(fn):
        CONSTRAINTS[name] = fn
        return fn

    return deco


class Grammar:
    """Immutable-after-freeze registry of rules keyed by output type."""

    def __init__(self, languages, default_constraints=("distinct_siblings",), registry=None):
        if not languages:
            raise UnknownLanguage("a grammar needs at least one language")
        self.languages = tuple(languages)
        self.default_constraints = tuple(default_constraints)
        self.rules: dict[str, list[Rule]] = {}
        self.rule_order: list[Rule] = []
        self.registry = dict(CONSTRAINTS if registry is None else registry)
        self._frozen = False

    def add(self, signature, *realizers, weight: float = 1.0, constraints=()):
        """Register a rule; a single realizer is shared by every language."""
        sig = parse_signature(signature) if isinstance(signature, str) else signature
        if len(realizers) == 1:
            realizers = realizers * len(self.languages)
        parsed = [parse_template(r) if isinstance(r, str) else r for r in realizers]
        rule = Rule(sig, dict(zip(self.languages, parsed)), float(weight), tuple(constraints))
        return register_rule(self, rule)

    def producing(self, type_name: str) -> list[Rule]:
        return self.rules.get(type_name, [])

    def freeze(self):
        """Run the closedness check; no rules may be added afterwards."""
        missing = sorted(
            {
                t
                for rule in self.rule_order
                for t in rule.signature.inputs
                if t not in self.rules
            }
        )
        if missing:
            raise OpenGrammar(f"no producing rule for type(s): {', '.join(missing)}")
        for rule in self.rule_order:
            for name in rule.constraints:
                if name not in self.registry:
                    raise GrammarFileError(f"unknown constraint {name!r}")
        for name in self.default_constraints:
            if name not in self.registry:
                raise GrammarFileError(f"unknown constraint {name!r}")
        self._frozen = True
        return self


def register_rule(grammar: Grammar, rule: Rule) -> Grammar:
    if grammar._frozen:
        raise GrammarFileError("grammar is frozen")
    if rule.weight <= 0:
        raise ValueError(f"rule weight must be positive, got {rule.weight}")
    for lang in grammar.languages:
        if lang not in rule.realizers:
            raise MissingRealizer(f"rule {rule.signature} lacks a realizer for {lang!r}")
    for lang in rule.realizers:
        if lang not in grammar.languages:
            raise UnknownLanguage(f"realizer for unregistered language {lang!r}")
    arity = rule.signature.arity
    for tpl in rule.realizers.values():
        if isinstance(tpl, Template):
            for tok in tpl.tokens:
                if isinstance(tok, Ref):
                    if tok.index >= arity:
                        raise MalformedSignature(
                            f"child reference {tok.index} out of range for {rule.signature}"
                        )
                    if tok.subst is not None and tok.subst[0] == "child" and tok.subst[1] >= arity:
                        raise MalformedSignature(
                            f"substitution child {tok.subst[1]} out of range for {rule.signature}"
                        )
    grammar.rules.setdefault(rule.output, []).append(rule)
    grammar.rule_order.append(rule)
    return grammar


# --- derivation trees and realization ---------------------------------------


class DerivationTree:
    """A node of a derivation: either an unexpanded nonterminal leaf or a
    rule application with one child per signature input."""

    __slots__ = ("type_name", "rule", "children", "parent", "memo")

    def __init__(self, type_name: str, rule: Rule | None = None, parent=None):
        self.type_name = type_name
        self.rule = rule
        self.children: list[DerivationTree] = []
        self.parent = parent
        self.memo: dict[str, str] = {}

    @property
    def is_expanded(self) -> bool:
        return self.rule is not None

    def root(self) -> "DerivationTree":
        node = self
        while node.parent is not None:
            node = node.parent
        return node

    def child_index(self) -> int | None:
        if self.parent is None:
            return None
        return self.parent.children.index(self)

    def __repr__(self):
        inner = f"{self.rule.signature}" if self.rule else "?"
        return f"<{self.type_name}: {inner}, {len(self.children)} children>"


def realize(tree: DerivationTree, language: str) -> str:
    """Bottom-up template evaluation; pure in (tree, language)."""
    cached = tree.memo.get(language)
    if cached is not None:
        return cached
    if tree.rule is None:
        raise UnexpandedLeaf(f"nonterminal leaf {tree.type_name!r} cannot be realized")
    tpl = tree.rule.realizers.get(language)
    if tpl is None:
        raise UnknownLanguage(f"no realizer for language {language!r}")
    kids = tree.children
    if isinstance(tpl, Join):
        result = tpl.separator.join(tpl.item.replace("?", realize(k, language)) for k in kids)
    else:
        parts: list[str] = []
        for tok in tpl.tokens:
            if isinstance(tok, Lit):
                parts.append(tok.text)
            elif isinstance(tok, Slot):
                parts.append("?")
            else:
                s = realize(kids[tok.index], language)
                if tok.subst is not None:
                    kind, val = tok.subst
                    target = val if kind == "lit" else realize(kids[val], language)
                    s = s.replace("?", target)
                parts.append(s)
        result = "".join(parts)
    tree.memo[language] = result
    return result


def residual_slot(text: str) -> bool:
    """True when the string still contains an unsubstituted slot.

    The existential quantifier is written ``?[`` in TPTP, so only a ``?``
    not followed by ``[`` counts as residual.
    """
    idx = text.find("?")
    while idx != -1:
        if idx + 1 >= len(text) or text[idx + 1] != "[":
            return True
        idx = text.find("?", idx + 1)
    return False


def check_constraints(node: DerivationTree, grammar: Grammar):
    """Evaluate the node's rule constraints plus the grammar defaults.

    Returns (True, None) on success, else (False, violated constraint id).
    """
    names = list(node.rule.constraints if node.rule else ())
    for name in grammar.default_constraints:
        if name not in names:
            names.append(name)
    for name in names:
        if not grammar.registry[name](node):
            return False, name
    return True, None


@constraint("distinct_siblings")
def _distinct_siblings(node: DerivationTree) -> bool:
    kids = node.children
    if len(kids) < 2:
        return True
    by_type: dict[str, list[DerivationTree]] = {}
    for k in kids:
        by_type.setdefault(k.type_name, []).append(k)
    rule = node.rule
    languages = rule.realizers.keys() if rule else ()
    for group in by_type.values():
        if len(group) < 2:
            continue
        for lang in languages:
            seen = set()
            for k in group:
                s = realize(k, lang)
                if s in seen:
                    return False
                seen.add(s)
    return True


# --- grammar file format ------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t") + '"'


def _unquote(s: str, where: str) -> str:
    s = s.strip()
    if len(s) < 2 or s[0] != '"' or s[-1] != '"':
        raise GrammarFileError(f"expected a quoted string in {where}")
    out = []
    i = 1
    while i < len(s) - 1:
        ch = s[i]
        if ch == "\\" and i + 1 < len(s) - 1:
            nxt = s[i + 1]
            mapped = {"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(nxt)
            if mapped is not None:
                out.append(mapped)
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, quoted, cur = [], 0, False, []
    i = 0
    while i < len(text):
        ch = text[i]
        if quoted:
            cur.append(ch)
            if ch == "\\" and i + 1 < len(text):
                cur.append(text[i + 1])
                i += 1
            elif ch == '"':
                quoted = False
        elif ch == '"':
            quoted = True
            cur.append(ch)
        elif ch == "(":
            depth += 1
            cur.append(ch)
        elif ch == ")":
            depth -= 1
            cur.append(ch)
        elif ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


def _parse_realizer(src: str, where: str):
    src = src.strip()
    if src.startswith("join(") and src.endswith(")"):
        args = _split_top(src[5:-1], ",")
        sep = _unquote(args[0], where)
        item = _unquote(args[1], where) if len(args) > 1 else "?"
        return Join(sep, item)
    return parse_template(_unquote(src, where))


def _print_realizer(r) -> str:
    if isinstance(r, Join):
        if r.item == "?":
            return f"join({_quote(r.separator)})"
        return f"join({_quote(r.separator)}, {_quote(r.item)})"
    return _quote(print_template(r))


def parse_grammar_file(text: str, registry=None):
    """Parse the declarative one-rule-per-line grammar format.

    Returns (grammar, meta) where meta holds the ``start`` and
    ``sentence_types`` headers (when present).  The grammar is frozen.
    """
    languages = None
    default_constraints = ("distinct_siblings",)
    meta: dict = {}
    pending: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("languages:"):
            languages = tuple(x.strip() for x in line.split(":", 1)[1].split(",") if x.strip())
        elif line.startswith("start:"):
            meta["start"] = line.split(":", 1)[1].strip()
        elif line.startswith("sentence_types:"):
            meta["sentence_types"] = [x.strip() for x in line.split(":", 1)[1].split(",") if x.strip()]
        elif line.startswith("default_constraints:"):
            default_constraints = tuple(
                x.strip() for x in line.split(":", 1)[1].split(",") if x.strip()
            )
        elif line.startswith("R(") and line.endswith(")"):
            pending.append((lineno, line))
        else:
            raise GrammarFileError(f"line {lineno}: cannot parse {line!r}")
    if languages is None:
        raise GrammarFileError("missing 'languages:' header")
    grammar = Grammar(languages, default_constraints=default_constraints, registry=registry)
    for lineno, line in pending:
        where = f"line {lineno}"
        fields = [f.strip() for f in _split_top(line[2:-1], ";")]
        if not fields:
            raise GrammarFileError(f"{where}: empty rule")
        sig = parse_signature(fields[0])
        realizers: list = []
        weight = 1.0
        constraints: tuple[str, ...] = ()
        for fieldsrc in fields[1:]:
            if fieldsrc.startswith("weight="):
                weight = float(fieldsrc[len("weight=") :])
            elif fieldsrc.startswith("constraints=[") and fieldsrc.endswith("]"):
                constraints = tuple(
                    x.strip() for x in fieldsrc[len("constraints=[") : -1].split(",") if x.strip()
                )
            else:
                realizers.append(_parse_realizer(fieldsrc, where))
        if not realizers:
            raise GrammarFileError(f"{where}: rule has no realizers")
        try:
            grammar.add(sig, *realizers, weight=weight, constraints=constraints)
        except Exception as exc:
            raise GrammarFileError(f"{where}: {exc}") from exc
    grammar.freeze()
    return grammar, meta


def serialize_grammar(grammar: Grammar, meta: dict | None = None) -> str:
    lines = ["languages: " + ", ".join(grammar.languages)]
    meta = meta or {}
    if "start" in meta:
        lines.append("start: " + meta["start"])
    if "sentence_types" in meta:
        lines.append("sentence_types: " + ", ".join(meta["sentence_types"]))
    lines.append("default_constraints: " + ", ".join(grammar.default_constraints))
    lines.append("")
    for rule in grammar.rule_order:
        sig = rule.signature
        sig_src = sig.output if not sig.inputs else f"{sig.output}({_compact_inputs(sig.inputs)})"
        fields = [sig_src]
        realizers = [rule.realizers[lang] for lang in grammar.languages]
        if len(set(map(id, realizers))) == 1 or all(r == realizers[0] for r in realizers):
            fields.append(_print_realizer(realizers[0]))
        else:
            fields.extend(_print_realizer(r) for r in realizers)
        if rule.weight != 1.0:
            fields.append("weight=" + format(rule.weight, "g"))
        if rule.constraints:
            fields.append("constraints=[" + ", ".join(rule.constraints) + "]")
        lines.append("R(" + "; ".join(fields) + ")")
    return "\n".join(lines) + "\n"


def _compact_inputs(inputs: tuple[str, ...]) -> str:
    parts = []
    i = 0
    while i < len(inputs):
        j = i
        while j < len(inputs) and inputs[j] == inputs[i]:
            j += 1
        run = j - i
        parts.append(inputs[i] if run == 1 else f"{inputs[i]}×{run}")
        i = j
    return ",".join(parts)
