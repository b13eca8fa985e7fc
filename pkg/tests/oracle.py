"""Independent brute-force satisfiability oracles used only by the tests.

Two deliberately separate decision paths live here, neither of which shares
any search machinery with ``unigram.logic.models`` (only the TPTP parser is
shared, since stored problems are strings):

* :func:`brute_tiny` -- literal model enumeration over every interpretation
  up to a small domain size.  Exponential in everything; only usable on toy
  inputs, but obviously correct.  It is itself cross-checked against
  ``monadic_oracle`` in the test suite.

* :func:`monadic_oracle` -- a complete enumerator for rank-1 monadic logic
  with equality and constants.  It enumerates partitions of the constants
  (which constants co-refer), depth-first assigns each constant class a
  monadic type with three-valued pruning, and finally reasons about the set
  of anonymous-element types S through bitmask constraints: every quantified
  subformula reduces to "S is contained in mask A" or "S meets mask B", and
  a sentence holds iff some truth assignment to those conditions is
  consistent.  Correctness rests on rank 1 only: an element's contribution
  to any sentence depends only on its monadic type and on which constants
  denote it, so models collapse to (partition, class types, realized
  anonymous type set).
"""

from __future__ import annotations

import itertools

from unigram.logic.ast import (
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


class OracleBudgetExceeded(Exception):
    pass


# --------------------------------------------------------------------------
# tiny fully-naive enumerator (handles binary predicates too)
# --------------------------------------------------------------------------


def _eval(f: Formula, env, consts, preds):
    if isinstance(f, Pred):
        args = tuple(env[a.name] if isinstance(a, Var) else consts[a.name] for a in f.args)
        return args in preds[(f.name, len(f.args))]
    if isinstance(f, Eq):
        lv = env[f.left.name] if isinstance(f.left, Var) else consts[f.left.name]
        rv = env[f.right.name] if isinstance(f.right, Var) else consts[f.right.name]
        return lv == rv
    if isinstance(f, Not):
        return not _eval(f.body, env, consts, preds)
    if isinstance(f, And):
        return all(_eval(i, env, consts, preds) for i in f.items)
    if isinstance(f, Or):
        return any(_eval(i, env, consts, preds) for i in f.items)
    if isinstance(f, Implies):
        return (not _eval(f.left, env, consts, preds)) or _eval(f.right, env, consts, preds)
    if isinstance(f, Iff):
        return _eval(f.left, env, consts, preds) == _eval(f.right, env, consts, preds)
    if isinstance(f, Xor):
        return _eval(f.left, env, consts, preds) != _eval(f.right, env, consts, preds)
    if isinstance(f, Forall):
        return all(_eval(f.body, {**env, f.var: e}, consts, preds) for e in range(_eval.domain))
    if isinstance(f, Exists):
        return any(_eval(f.body, {**env, f.var: e}, consts, preds) for e in range(_eval.domain))
    raise TypeError(f)


def brute_tiny(formulas: list[Formula], max_domain: int = 3, budget: int = 2_000_000):
    """True if a model with at most ``max_domain`` elements exists, else False.

    A False only refutes satisfiability up to the given size.  Raises
    OracleBudgetExceeded rather than silently truncating the search.
    """
    pred_sigs = sorted({p for f in formulas for p in _pred_signatures(f)})
    const_names = sorted({c for f in formulas for c in _const_names(f)})
    steps = 0
    for n in range(1, max_domain + 1):
        _eval.domain = n
        atoms = []
        for name, arity in pred_sigs:
            atoms.extend(((name, arity), combo) for combo in itertools.product(range(n), repeat=arity))
        for cvals in itertools.product(range(n), repeat=len(const_names)):
            consts = dict(zip(const_names, cvals))
            for bits in range(1 << len(atoms)):
                steps += 1
                if steps > budget:
                    raise OracleBudgetExceeded(steps)
                preds = {sig: set() for sig in pred_sigs}
                for i, (sig, combo) in enumerate(atoms):
                    if bits >> i & 1:
                        preds[sig].add(combo)
                if all(_eval(f, {}, consts, preds) for f in formulas):
                    return True
    return False


def _pred_signatures(f: Formula):
    return {(g.name, len(g.args)) for g in walk(f) if isinstance(g, Pred)}


def _const_names(f: Formula):
    out = set()
    for g in walk(f):
        if isinstance(g, Pred):
            out |= {a.name for a in g.args if isinstance(a, Const)}
        elif isinstance(g, Eq):
            out |= {t.name for t in (g.left, g.right) if isinstance(t, Const)}
    return out


# --------------------------------------------------------------------------
# complete rank-1 monadic enumerator
# --------------------------------------------------------------------------


def _max_quantifier_rank(f: Formula, depth: int = 0) -> int:
    if isinstance(f, (Forall, Exists)):
        return _max_quantifier_rank(f.body, depth + 1)
    best = depth
    for c in children(f):
        best = max(best, _max_quantifier_rank(c, depth))
    return best


def _partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [p[i] + [first]] + p[i + 1 :]
        yield p + [[first]]


class _Subset:
    """Condition: every anonymous type in S lies inside ``mask``."""

    __slots__ = ("mask",)

    def __init__(self, mask):
        self.mask = mask


class _Meets:
    """Condition: S contains at least one type from ``mask``."""

    __slots__ = ("mask",)

    def __init__(self, mask):
        self.mask = mask


class _Monadic:
    def __init__(self, formulas, budget):
        self.formulas = formulas
        self.budget = budget
        self.steps = 0
        self.pred_names = sorted({name for f in formulas for (name, _a) in _pred_signatures(f)})
        self.k = len(self.pred_names)
        self.pred_index = {p: i for i, p in enumerate(self.pred_names)}
        self.const_names = sorted({c for f in formulas for c in _const_names(f)})
        self.ntypes = 1 << self.k
        self.full_mask = (1 << self.ntypes) - 1

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise OracleBudgetExceeded(self.steps)

    # -- three-valued evaluation during class-type assignment --------------

    def _eval3(self, f, classes, types, const_class):
        self._tick()
        if isinstance(f, Pred):
            ti = types[const_class[f.args[0].name]]
            if ti is None:
                return None
            return bool(ti >> self.pred_index[f.name] & 1)
        if isinstance(f, Eq):
            return const_class[f.left.name] == const_class[f.right.name]
        if isinstance(f, Not):
            v = self._eval3(f.body, classes, types, const_class)
            return None if v is None else not v
        if isinstance(f, (And, Or)):
            vals = [self._eval3(i, classes, types, const_class) for i in f.items]
            if isinstance(f, And):
                if False in vals:
                    return False
                return None if None in vals else True
            if True in vals:
                return True
            return None if None in vals else False
        if isinstance(f, Implies):
            l = self._eval3(f.left, classes, types, const_class)
            r = self._eval3(f.right, classes, types, const_class)
            if l is False or r is True:
                return True
            if l is True and r is False:
                return False
            return None
        if isinstance(f, (Iff, Xor)):
            l = self._eval3(f.left, classes, types, const_class)
            r = self._eval3(f.right, classes, types, const_class)
            if l is None or r is None:
                return None
            same = l == r
            return same if isinstance(f, Iff) else not same
        if isinstance(f, Forall):
            # classes may already falsify it; anonymous elements stay unknown
            for ci in range(len(classes)):
                if self._body_at_class(f.body, f.var, ci, classes, types, const_class) is False:
                    return False
            return None
        if isinstance(f, Exists):
            for ci in range(len(classes)):
                if self._body_at_class(f.body, f.var, ci, classes, types, const_class) is True:
                    return True
            return None
        raise TypeError(f)

    def _body_at_class(self, body, var, ci, classes, types, const_class):
        self._tick()
        if isinstance(body, Pred):
            term = body.args[0]
            idx = ci if isinstance(term, Var) else const_class[term.name]
            ti = types[idx]
            if ti is None:
                return None
            return bool(ti >> self.pred_index[body.name] & 1)
        if isinstance(body, Eq):
            def cls_of(t):
                return ci if isinstance(t, Var) else const_class[t.name]
            return cls_of(body.left) == cls_of(body.right)
        if isinstance(body, Not):
            v = self._body_at_class(body.body, var, ci, classes, types, const_class)
            return None if v is None else not v
        if isinstance(body, And):
            vals = [self._body_at_class(i, var, ci, classes, types, const_class) for i in body.items]
            if False in vals:
                return False
            return None if None in vals else True
        if isinstance(body, Or):
            vals = [self._body_at_class(i, var, ci, classes, types, const_class) for i in body.items]
            if True in vals:
                return True
            return None if None in vals else False
        if isinstance(body, Implies):
            l = self._body_at_class(body.left, var, ci, classes, types, const_class)
            r = self._body_at_class(body.right, var, ci, classes, types, const_class)
            if l is False or r is True:
                return True
            if l is True and r is False:
                return False
            return None
        if isinstance(body, (Iff, Xor)):
            l = self._body_at_class(body.left, var, ci, classes, types, const_class)
            r = self._body_at_class(body.right, var, ci, classes, types, const_class)
            if l is None or r is None:
                return None
            same = l == r
            return same if isinstance(body, Iff) else not same
        raise TypeError(body)

    # -- exact body evaluation at an anonymous element of type t -----------

    def _body_at_type(self, body, t, classes, types, const_class):
        self._tick()
        if isinstance(body, Pred):
            term = body.args[0]
            if isinstance(term, Var):
                return bool(t >> self.pred_index[body.name] & 1)
            return bool(types[const_class[term.name]] >> self.pred_index[body.name] & 1)
        if isinstance(body, Eq):
            lv, rv = body.left, body.right
            if isinstance(lv, Var) and isinstance(rv, Var):
                return True
            if isinstance(lv, Var) or isinstance(rv, Var):
                return False  # anonymous element equals no constant
            return const_class[lv.name] == const_class[rv.name]
        if isinstance(body, Not):
            return not self._body_at_type(body.body, t, classes, types, const_class)
        if isinstance(body, And):
            return all(self._body_at_type(i, t, classes, types, const_class) for i in body.items)
        if isinstance(body, Or):
            return any(self._body_at_type(i, t, classes, types, const_class) for i in body.items)
        if isinstance(body, Implies):
            return (not self._body_at_type(body.left, t, classes, types, const_class)) or self._body_at_type(
                body.right, t, classes, types, const_class
            )
        if isinstance(body, Iff):
            return self._body_at_type(body.left, t, classes, types, const_class) == self._body_at_type(
                body.right, t, classes, types, const_class
            )
        if isinstance(body, Xor):
            return self._body_at_type(body.left, t, classes, types, const_class) != self._body_at_type(
                body.right, t, classes, types, const_class
            )
        raise TypeError(body)

    # -- reduce a sentence to an expression over S-conditions --------------

    def _reduce(self, f, classes, types, const_class):
        """Return True, False, or a tree of (op, parts) / condition leaves."""
        self._tick()
        if isinstance(f, Forall):
            for ci in range(len(classes)):
                if not self._body_at_class_exact(f.body, ci, classes, types, const_class):
                    return False
            mask = 0
            for t in range(self.ntypes):
                if self._body_at_type(f.body, t, classes, types, const_class):
                    mask |= 1 << t
            if mask == self.full_mask:
                return True
            return _Subset(mask)
        if isinstance(f, Exists):
            for ci in range(len(classes)):
                if self._body_at_class_exact(f.body, ci, classes, types, const_class):
                    return True
            mask = 0
            for t in range(self.ntypes):
                if self._body_at_type(f.body, t, classes, types, const_class):
                    mask |= 1 << t
            if mask == 0:
                return False
            return _Meets(mask)
        if isinstance(f, Pred):
            return bool(types[const_class[f.args[0].name]] >> self.pred_index[f.name] & 1)
        if isinstance(f, Eq):
            return const_class[f.left.name] == const_class[f.right.name]
        if isinstance(f, Not):
            inner = self._reduce(f.body, classes, types, const_class)
            if isinstance(inner, bool):
                return not inner
            return ("not", [inner])
        if isinstance(f, (And, Or)):
            parts = []
            for item in f.items:
                v = self._reduce(item, classes, types, const_class)
                if isinstance(v, bool):
                    if isinstance(f, And) and not v:
                        return False
                    if isinstance(f, Or) and v:
                        return True
                    continue
                parts.append(v)
            if not parts:
                return isinstance(f, And)
            return ("and" if isinstance(f, And) else "or", parts)
        if isinstance(f, Implies):
            return self._reduce(Or((Not(f.left), f.right)), classes, types, const_class)
        if isinstance(f, Iff):
            return self._reduce(
                And((Implies(f.left, f.right), Implies(f.right, f.left))), classes, types, const_class
            )
        if isinstance(f, Xor):
            return self._reduce(Not(Iff(f.left, f.right)), classes, types, const_class)
        raise TypeError(f)

    def _body_at_class_exact(self, body, ci, classes, types, const_class):
        v = self._body_at_class(body, None, ci, classes, types, const_class)
        assert v is not None  # types fully assigned at this stage
        return v

    # -- search over truth assignments to the S-conditions ------------------

    def _conditions(self, expr, acc):
        if isinstance(expr, (_Subset, _Meets)):
            acc.append(expr)
        elif isinstance(expr, tuple):
            for part in expr[1]:
                self._conditions(part, acc)

    def _expr_value(self, expr, assignment):
        if isinstance(expr, (_Subset, _Meets)):
            return assignment[id(expr)]
        op, parts = expr
        vals = [self._expr_value(p, assignment) for p in parts]
        if op == "not":
            return not vals[0]
        if op == "and":
            return all(vals)
        return any(vals)

    def _satisfy_sentences(self, exprs, idx, allowed, requirements):
        if any(req & allowed == 0 for req in requirements):
            return False
        if idx == len(exprs):
            return True
        expr = exprs[idx]
        conds: list = []
        self._conditions(expr, conds)
        for bits in range(1 << len(conds)):
            self._tick()
            assignment = {id(c): bool(bits >> i & 1) for i, c in enumerate(conds)}
            if not self._expr_value(expr, assignment):
                continue
            new_allowed = allowed
            new_reqs = list(requirements)
            for i, c in enumerate(conds):
                val = assignment[id(c)]
                if isinstance(c, _Subset):
                    if val:
                        new_allowed &= c.mask
                    else:
                        new_reqs.append(self.full_mask & ~c.mask)
                else:
                    if val:
                        new_reqs.append(c.mask)
                    else:
                        new_allowed &= self.full_mask & ~c.mask
            if self._satisfy_sentences(exprs, idx + 1, new_allowed, new_reqs):
                return True
        return False

    # -- outer search --------------------------------------------------------

    def check(self) -> bool:
        consts = self.const_names
        for raw_partition in _partitions(consts):
            classes = [sorted(group) for group in raw_partition]
            classes.sort()
            const_class = {c: i for i, group in enumerate(classes) for c in group}
            if self._assign_classes(classes, [None] * len(classes), const_class, 0):
                return True
        return False

    def _assign_classes(self, classes, types, const_class, ci):
        if ci == len(classes):
            exprs = []
            for f in self.formulas:
                v = self._reduce(f, classes, types, const_class)
                if v is False:
                    return False
                if v is not True:
                    exprs.append(v)
            requirements = []
            if not classes:
                requirements.append(self.full_mask)  # nonempty domain
            return self._satisfy_sentences(exprs, 0, self.full_mask, requirements)
        for t in range(self.ntypes):
            types[ci] = t
            ok = True
            for f in self.formulas:
                if self._eval3(f, classes, types, const_class) is False:
                    ok = False
                    break
            if ok and self._assign_classes(classes, types, const_class, ci + 1):
                return True
        types[ci] = None
        return False


def monadic_oracle(formulas, budget: int = 8_000_000):
    """Exact satisfiability for rank-1 monadic formulas with equality.

    Returns True/False, or None when the input falls outside the fragment.
    Raises OracleBudgetExceeded when the search grows past ``budget`` steps.
    """
    parsed = [parse_fof(f) if isinstance(f, str) else f for f in formulas]
    for f in parsed:
        if any(arity >= 2 for _n, arity in _pred_signatures(f)):
            return None
        if _max_quantifier_rank(f) > 1:
            return None
    return _Monadic(parsed, budget).check()


def oracle_label(premises, hypothesis, budget: int = 8_000_000):
    """entailment / contradiction / neutral, or None if outside the fragment."""
    parsed_p = [parse_fof(p) if isinstance(p, str) else p for p in premises]
    parsed_h = parse_fof(hypothesis) if isinstance(hypothesis, str) else hypothesis
    without = monadic_oracle(parsed_p + [Not(parsed_h)], budget)
    if without is None:
        return None
    if without is False:
        return "entailment"
    with_h = monadic_oracle(parsed_p + [parsed_h], budget)
    if with_h is None:
        return None
    if with_h is False:
        return "contradiction"
    return "neutral"
