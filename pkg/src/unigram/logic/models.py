"""Bounded model finding over formula sets.

``check_sat_bounded`` searches finite models of growing size up to
``max_domain``.  The search space is symmetry-reduced: a candidate universe
consists of one element per constant (which may co-refer; there is no
unique-name assumption) plus one optional anonymous element per
existentially-acting quantifier occurrence.  For formula sets where every
existentially-acting quantifier has a quantifier-free monadic body and every
binary atom is ground or sits under purely universal quantifiers, that
universe shape is exhaustive, so failure of the encoding refutes
satisfiability outright:

* universal sentences survive restriction to a substructure,
* a rank-1 monadic body sees an element only through its monadic type and
  the set of constants denoting it, so each existential keeps one witness.

Claiming UNSAT additionally requires ``max_domain`` to cover the classical
finite-model-property bound (``2^k + c`` for k monadic predicates and c
constants in the purely monadic case, the micro-universe size otherwise).
Everything else falls back to explicit search over domain sizes 1..cap and
can only answer SAT or UNKNOWN.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import BoundTooSmall, UnigramError
from . import sat
from .ast import (
    And,
    Const,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    Var,
    Xor,
    children,
    parse_fof,
    walk,
)

DEFAULT_MAX_DOMAIN = 2**62
GENERIC_SIZE_CAP = 6

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Model:
    """A finite interpretation: elements 0..size-1, constant denotations,
    and predicate extensions keyed by (name, arity)."""

    size: int
    consts: dict
    preds: dict

    def holds(self, formula: Formula) -> bool:
        return eval_formula(formula, self)


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Model | None = None
    source: str = "internal"
    detail: str | None = None


def eval_formula(f: Formula, model: Model, env: dict | None = None) -> bool:
    """Direct recursive semantics of a formula in a finite model."""
    env = env or {}

    def term(t):
        return env[t.name] if isinstance(t, Var) else model.consts[t.name]

    if isinstance(f, Pred):
        return tuple(term(a) for a in f.args) in model.preds.get((f.name, len(f.args)), frozenset())
    if isinstance(f, Eq):
        return term(f.left) == term(f.right)
    if isinstance(f, Not):
        return not eval_formula(f.body, model, env)
    if isinstance(f, And):
        return all(eval_formula(i, model, env) for i in f.items)
    if isinstance(f, Or):
        return any(eval_formula(i, model, env) for i in f.items)
    if isinstance(f, Implies):
        return (not eval_formula(f.left, model, env)) or eval_formula(f.right, model, env)
    if isinstance(f, Iff):
        return eval_formula(f.left, model, env) == eval_formula(f.right, model, env)
    if isinstance(f, Xor):
        return eval_formula(f.left, model, env) != eval_formula(f.right, model, env)
    if isinstance(f, Forall):
        return all(eval_formula(f.body, model, {**env, f.var: e}) for e in range(model.size))
    if isinstance(f, Exists):
        return any(eval_formula(f.body, model, {**env, f.var: e}) for e in range(model.size))
    raise TypeError(f"not a formula: {f!r}")


# --- signature scanning -----------------------------------------------------


def _signature(formulas):
    monadic, binary, consts, zeroary = set(), set(), set(), set()
    oversized = False
    for f in formulas:
        for g in walk(f):
            if isinstance(g, Pred):
                arity = len(g.args)
                if arity == 0:
                    zeroary.add(g.name)
                elif arity == 1:
                    monadic.add(g.name)
                elif arity == 2:
                    binary.add(g.name)
                else:
                    oversized = True
                consts.update(a.name for a in g.args if isinstance(a, Const))
            elif isinstance(g, Eq):
                consts.update(t.name for t in (g.left, g.right) if isinstance(t, Const))
    return sorted(monadic), sorted(binary), sorted(consts), sorted(zeroary), oversized


def _body_is_monadic_quantifier_free(body) -> bool:
    for g in walk(body):
        if isinstance(g, (Forall, Exists)):
            return False
        if isinstance(g, Pred) and len(g.args) != 1:
            return False
    return True


def _fragment_scan(formulas):
    """Count existential witnesses needed, or return None when the guarded
    micro-universe encoding is not exhaustive for this formula set."""
    witnesses = 0
    ok = True

    def rec(node, pol, depth):
        nonlocal witnesses, ok
        if not ok:
            return
        if isinstance(node, Not):
            rec(node.body, -pol, depth)
        elif isinstance(node, Implies):
            rec(node.left, -pol, depth)
            rec(node.right, pol, depth)
        elif isinstance(node, (Iff, Xor)):
            rec(node.left, 0, depth)
            rec(node.right, 0, depth)
        elif isinstance(node, (And, Or)):
            for c in node.items:
                rec(c, pol, depth)
        elif isinstance(node, (Forall, Exists)):
            exists_acting = (isinstance(node, Exists) and pol in (1, 0)) or (
                isinstance(node, Forall) and pol in (-1, 0)
            )
            if exists_acting:
                if depth > 0 or not _body_is_monadic_quantifier_free(node.body):
                    ok = False
                    return
                witnesses += 1
            else:
                for g in walk(node.body):
                    if isinstance(g, Pred) and len(g.args) > 2:
                        ok = False
                        return
            rec(node.body, pol, depth + 1)
        # atoms need no walk

    for f in formulas:
        rec(f, 1, 0)
    return witnesses if ok else None


# --- CNF building -----------------------------------------------------------


class _Cnf:
    def __init__(self):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.vars: dict = {}

    def var(self, key) -> int:
        v = self.vars.get(key)
        if v is None:
            self.nvars += 1
            v = self.nvars
            self.vars[key] = v
        return v

    def new(self) -> int:
        self.nvars += 1
        return self.nvars

    def add(self, lits):
        seen = set()
        out = []
        for l in lits:
            if -l in seen:
                return  # tautology
            if l not in seen:
                seen.add(l)
                out.append(l)
        self.clauses.append(out)

    def enc_and(self, parts):
        lits = []
        for p in parts:
            if p is False:
                return False
            if p is True:
                continue
            lits.append(p)
        if not lits:
            return True
        if len(lits) == 1:
            return lits[0]
        v = self.new()
        for l in lits:
            self.add([-v, l])
        self.add([v] + [-l for l in lits])
        return v

    def enc_or(self, parts):
        neg = self.enc_and([_neg(p) for p in parts])
        return _neg(neg)

    def enc_iff(self, a, b):
        if a is True:
            return b
        if b is True:
            return a
        if a is False:
            return _neg(b)
        if b is False:
            return _neg(a)
        v = self.new()
        self.add([-v, -a, b])
        self.add([-v, a, -b])
        self.add([v, a, b])
        self.add([v, -a, -b])
        return v


def _neg(x):
    return (not x) if isinstance(x, bool) else -x


# --- the guarded micro-universe encoding ------------------------------------


class _MicroEncoder:
    def __init__(self, formulas, monadic, binary, consts, zeroary, witnesses):
        self.cnf = _Cnf()
        self.monadic = monadic
        self.binary = binary
        self.consts = consts
        self.const_idx = {c: i for i, c in enumerate(consts)}
        n_anon = witnesses if (consts or witnesses) else 1
        self.n_elem = len(consts) + n_anon
        self.anon_range = range(len(consts), self.n_elem)
        self.formulas = formulas
        self.zeroary = zeroary

    def is_const(self, e):
        return e < len(self.consts)

    def guard(self, e):
        return self.cnf.var(("ex", e)) if not self.is_const(e) else None

    def merge_var(self, a, b):
        return self.cnf.var(("merge", min(a, b), max(a, b)))

    def eq_lit(self, ea, eb):
        if ea == eb:
            return True
        if self.is_const(ea) and self.is_const(eb):
            return self.merge_var(ea, eb)
        return False  # anonymous elements are fresh

    def atom_lit(self, name, elems):
        if len(elems) == 0:
            return self.cnf.var(("p0", name))
        if len(elems) == 1:
            return self.cnf.var(("m", name, elems[0]))
        return self.cnf.var(("r", name, elems[0], elems[1]))

    def structural_clauses(self):
        cnf = self.cnf
        nc = len(self.consts)
        # merge transitivity
        for a in range(nc):
            for b in range(a + 1, nc):
                for c in range(b + 1, nc):
                    mab, mbc, mac = self.merge_var(a, b), self.merge_var(b, c), self.merge_var(a, c)
                    cnf.add([-mab, -mbc, mac])
                    cnf.add([-mab, -mac, mbc])
                    cnf.add([-mac, -mbc, mab])
        # congruence of predicates under merges
        for a in range(nc):
            for b in range(a + 1, nc):
                m = self.merge_var(a, b)
                for p in self.monadic:
                    pa, pb = self.atom_lit(p, (a,)), self.atom_lit(p, (b,))
                    cnf.add([-m, -pa, pb])
                    cnf.add([-m, pa, -pb])
                for r in self.binary:
                    for e in range(self.n_elem):
                        for pair_a, pair_b in (((a, e), (b, e)), ((e, a), (e, b))):
                            ra, rb = self.atom_lit(r, pair_a), self.atom_lit(r, pair_b)
                            cnf.add([-m, -ra, rb])
                            cnf.add([-m, ra, -rb])
        # the universe is nonempty
        if not self.consts:
            cnf.add([self.guard(e) for e in self.anon_range])

    def enc(self, f, env):
        cnf = self.cnf
        if isinstance(f, Pred):
            elems = tuple(env[a.name] if isinstance(a, Var) else self.const_idx[a.name] for a in f.args)
            return self.atom_lit(f.name, elems)
        if isinstance(f, Eq):
            ea = env[f.left.name] if isinstance(f.left, Var) else self.const_idx[f.left.name]
            eb = env[f.right.name] if isinstance(f.right, Var) else self.const_idx[f.right.name]
            return self.eq_lit(ea, eb)
        if isinstance(f, Not):
            return _neg(self.enc(f.body, env))
        if isinstance(f, And):
            return cnf.enc_and([self.enc(i, env) for i in f.items])
        if isinstance(f, Or):
            return cnf.enc_or([self.enc(i, env) for i in f.items])
        if isinstance(f, Implies):
            return cnf.enc_or([_neg(self.enc(f.left, env)), self.enc(f.right, env)])
        if isinstance(f, Iff):
            return cnf.enc_iff(self.enc(f.left, env), self.enc(f.right, env))
        if isinstance(f, Xor):
            return _neg(cnf.enc_iff(self.enc(f.left, env), self.enc(f.right, env)))
        if isinstance(f, Forall):
            parts = []
            for e in range(self.n_elem):
                inst = self.enc(f.body, {**env, f.var: e})
                g = self.guard(e)
                parts.append(inst if g is None else cnf.enc_or([-g, inst]))
            return cnf.enc_and(parts)
        if isinstance(f, Exists):
            parts = []
            for e in range(self.n_elem):
                inst = self.enc(f.body, {**env, f.var: e})
                g = self.guard(e)
                parts.append(inst if g is None else cnf.enc_and([g, inst]))
            return cnf.enc_or(parts)
        raise TypeError(f"not a formula: {f!r}")

    def encode(self) -> bool:
        """Returns False when constant folding already refutes the set."""
        self.structural_clauses()
        for f in self.formulas:
            lit = self.enc(f, {})
            if lit is False:
                return False
            if lit is not True:
                self.cnf.add([lit])
        return True

    def extract(self, assignment) -> Model:
        def assigned(key):
            v = self.cnf.vars.get(key)
            return bool(v and assignment[v])

        nc = len(self.consts)
        # quotient the constants by the merge relation
        rep = list(range(nc))

        def find(x):
            while rep[x] != x:
                rep[x] = rep[rep[x]]
                x = rep[x]
            return x

        for a in range(nc):
            for b in range(a + 1, nc):
                if assigned(("merge", a, b)) and find(a) != find(b):
                    rep[find(b)] = find(a)
        kept = [e for e in range(nc) if find(e) == e]
        kept += [e for e in self.anon_range if assigned(("ex", e))]
        remap = {e: i for i, e in enumerate(kept)}
        consts = {c: remap[find(i)] for c, i in self.const_idx.items()}
        preds = {}
        for p in self.monadic:
            preds[(p, 1)] = frozenset((remap[e],) for e in kept if assigned(("m", p, e)))
        for r in self.binary:
            preds[(r, 2)] = frozenset(
                (remap[a], remap[b]) for a in kept for b in kept if assigned(("r", r, a, b))
            )
        for z in self.zeroary:
            preds[(z, 0)] = frozenset([()] if assigned(("p0", z)) else [])
        return Model(size=len(kept), consts=consts, preds=preds)


def _shrink_witness(model: Model, formulas) -> Model:
    """Drop elements no constant denotes while the model keeps satisfying
    everything; purely cosmetic, keeps witnesses small."""
    current = model
    changed = True
    while changed and current.size > 1:
        changed = False
        denoted = set(current.consts.values())
        for victim in range(current.size - 1, -1, -1):
            if victim in denoted:
                continue
            remap = {e: (e if e < victim else e - 1) for e in range(current.size) if e != victim}
            candidate = Model(
                size=current.size - 1,
                consts={c: remap[e] for c, e in current.consts.items()},
                preds={
                    sig: frozenset(tuple(remap[x] for x in tup) for tup in ext if victim not in tup)
                    for sig, ext in current.preds.items()
                },
            )
            if candidate.size >= 1 and all(eval_formula(f, candidate) for f in formulas):
                current = candidate
                changed = True
                break
    return current


# --- explicit search at a fixed domain size (generic fallback) --------------


class _FixedSizeEncoder:
    def __init__(self, formulas, monadic, binary, consts, zeroary, size):
        self.cnf = _Cnf()
        self.size = size
        self.monadic = monadic
        self.binary = binary
        self.consts = consts
        self.zeroary = zeroary
        self.formulas = formulas

    def den_var(self, c, e):
        return self.cnf.var(("den", c, e))

    def atom_lit(self, name, elems):
        if len(elems) == 0:
            return self.cnf.var(("p0", name))
        if len(elems) == 1:
            return self.cnf.var(("m", name, elems[0]))
        return self.cnf.var(("r", name, elems[0], elems[1]))

    def term_lits(self, t, env):
        """List of (condition lit/True, element) pairs for a term's value."""
        if isinstance(t, Var):
            return [(True, env[t.name])]
        return [(self.den_var(t.name, e), e) for e in range(self.size)]

    def enc(self, f, env):
        cnf = self.cnf
        if isinstance(f, Pred):
            combos = [((), True)]
            for a in f.args:
                new = []
                for elems, cond in combos:
                    for c, e in self.term_lits(a, env):
                        new.append((elems + (e,), cnf.enc_and([cond, c])))
                combos = new
            parts = [cnf.enc_and([cond, self.atom_lit(f.name, elems)]) for elems, cond in combos]
            return cnf.enc_or(parts)
        if isinstance(f, Eq):
            parts = []
            for cl, el in self.term_lits(f.left, env):
                for cr, er in self.term_lits(f.right, env):
                    if el == er:
                        parts.append(cnf.enc_and([cl, cr]))
            return cnf.enc_or(parts)
        if isinstance(f, Not):
            return _neg(self.enc(f.body, env))
        if isinstance(f, And):
            return cnf.enc_and([self.enc(i, env) for i in f.items])
        if isinstance(f, Or):
            return cnf.enc_or([self.enc(i, env) for i in f.items])
        if isinstance(f, Implies):
            return cnf.enc_or([_neg(self.enc(f.left, env)), self.enc(f.right, env)])
        if isinstance(f, Iff):
            return cnf.enc_iff(self.enc(f.left, env), self.enc(f.right, env))
        if isinstance(f, Xor):
            return _neg(cnf.enc_iff(self.enc(f.left, env), self.enc(f.right, env)))
        if isinstance(f, Forall):
            return cnf.enc_and([self.enc(f.body, {**env, f.var: e}) for e in range(self.size)])
        if isinstance(f, Exists):
            return cnf.enc_or([self.enc(f.body, {**env, f.var: e}) for e in range(self.size)])
        raise TypeError(f"not a formula: {f!r}")

    def encode(self) -> bool:
        cnf = self.cnf
        for c in self.consts:
            cnf.add([self.den_var(c, e) for e in range(self.size)])
            for a in range(self.size):
                for b in range(a + 1, self.size):
                    cnf.add([-self.den_var(c, a), -self.den_var(c, b)])
        for f in self.formulas:
            lit = self.enc(f, {})
            if lit is False:
                return False
            if lit is not True:
                cnf.add([lit])
        return True

    def extract(self, assignment) -> Model:
        def assigned(key):
            v = self.cnf.vars.get(key)
            return bool(v and assignment[v])

        consts = {}
        for c in self.consts:
            for e in range(self.size):
                if assigned(("den", c, e)):
                    consts[c] = e
                    break
        preds = {}
        for p in self.monadic:
            preds[(p, 1)] = frozenset((e,) for e in range(self.size) if assigned(("m", p, e)))
        for r in self.binary:
            preds[(r, 2)] = frozenset(
                (a, b) for a in range(self.size) for b in range(self.size) if assigned(("r", r, a, b))
            )
        for z in self.zeroary:
            preds[(z, 0)] = frozenset([()] if assigned(("p0", z)) else [])
        return Model(size=self.size, consts=consts, preds=preds)


# --- public entry point ------------------------------------------------------


def check_sat_bounded(
    formulas,
    max_domain: int = DEFAULT_MAX_DOMAIN,
    strict: bool = False,
    solver_budget: int = 20_000_000,
) -> Verdict:
    """Three-valued satisfiability of a closed formula set.

    SAT verdicts carry a finite witness model.  UNSAT is only claimed when
    exhausting the search space is a genuine refutation (see module
    docstring); otherwise UNKNOWN is returned, or BoundTooSmall is raised
    when ``strict`` is set.
    """
    if max_domain < 1:
        raise ValueError("max_domain must be positive")
    parsed = [parse_fof(f) if isinstance(f, str) else f for f in formulas]
    monadic, binary, consts, zeroary, oversized = _signature(parsed)

    def undecided(detail):
        if strict:
            raise BoundTooSmall(detail)
        return Verdict(UNKNOWN, detail=detail)

    if oversized:
        return undecided("predicates of arity > 2 are unsupported")

    witnesses = _fragment_scan(parsed)
    if witnesses is not None:
        enc = _MicroEncoder(parsed, monadic, binary, consts, zeroary, witnesses)
        if binary:
            license_bound = enc.n_elem
        else:
            license_bound = (1 << len(monadic)) + len(consts)
        feasible = enc.encode()
        assignment = None
        if feasible:
            try:
                assignment = sat.solve(enc.cnf.nvars, enc.cnf.clauses, budget=solver_budget)
            except sat.SolverBudget:
                return undecided("solver budget exhausted")
        if assignment is None:
            if max_domain >= license_bound:
                return Verdict(UNSAT)
            return undecided(f"no model within the micro universe; refutation needs max_domain >= {license_bound}")
        model = enc.extract(assignment)
        for f in parsed:
            if not eval_formula(f, model):
                raise UnigramError("internal error: extracted witness fails re-evaluation")
        model = _shrink_witness(model, parsed)
        if model.size > max_domain:
            return undecided(f"smallest found model has {model.size} elements > max_domain")
        return Verdict(SAT, witness=model)

    # generic fallback: explicit domain sizes, SAT-or-UNKNOWN only
    cap = min(max_domain, GENERIC_SIZE_CAP)
    for size in range(1, cap + 1):
        enc = _FixedSizeEncoder(parsed, monadic, binary, consts, zeroary, size)
        if not enc.encode():
            continue
        try:
            assignment = sat.solve(enc.cnf.nvars, enc.cnf.clauses, budget=solver_budget)
        except sat.SolverBudget:
            return undecided("solver budget exhausted")
        if assignment is not None:
            model = enc.extract(assignment)
            for f in parsed:
                if not eval_formula(f, model):
                    raise UnigramError("internal error: extracted witness fails re-evaluation")
            return Verdict(SAT, witness=model)
    return undecided(f"outside the refutation-complete fragment; no model up to size {cap}")
