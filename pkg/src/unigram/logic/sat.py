"""A small CNF SAT solver: iterative DPLL with two watched literals.

Instances produced by the model-finding encodings are tiny (hundreds of
variables, a few thousand clauses), so chronological backtracking without
clause learning is fast enough.  Determinism matters more than raw speed:
the branching order is fixed (lowest-index variable, false first), which
also tends to keep extracted models sparse.
"""

from __future__ import annotations


class SolverBudget(Exception):
    """Search exceeded its step budget; callers report UNKNOWN."""


def solve(nvars: int, clauses: list[list[int]], budget: int = 20_000_000):
    """Return a satisfying assignment as a list of bools indexed 1..nvars,
    or None when the clause set is unsatisfiable.

    Literals are nonzero signed ints; an empty clause means UNSAT.
    ``clauses`` is mutated in place (watched-literal reordering).
    """
    assign = [0] * (nvars + 1)  # 0 unassigned / 1 true / -1 false
    watches: dict[int, list[int]] = {}
    trail: list[int] = []
    # decision stack entries: [trail length before decision, literal, flipped flag]
    decisions: list[list[int]] = []
    prop_queue: list[int] = []
    steps = 0

    def value(lit: int) -> int:
        v = assign[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def enqueue(lit: int) -> bool:
        v = value(lit)
        if v == 1:
            return True
        if v == -1:
            return False
        assign[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)
        prop_queue.append(lit)
        return True

    def propagate() -> bool:
        nonlocal steps
        while prop_queue:
            falsified = -prop_queue.pop()
            wl = watches.get(falsified)
            if not wl:
                continue
            i = 0
            while i < len(wl):
                steps += 1
                if steps > budget:
                    raise SolverBudget(steps)
                ci = wl[i]
                clause = clauses[ci]
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if value(first) == 1:
                    i += 1
                    continue
                moved = False
                for j in range(2, len(clause)):
                    lj = clause[j]
                    if value(lj) != -1:
                        clause[1], clause[j] = clause[j], clause[1]
                        watches.setdefault(lj, []).append(ci)
                        wl[i] = wl[-1]
                        wl.pop()
                        moved = True
                        break
                if moved:
                    continue
                if not enqueue(first):
                    prop_queue.clear()
                    return False
                i += 1
        return True

    def unwind(mark: int) -> int:
        """Unassign the trail suffix; return the lowest variable freed."""
        lowest = nvars + 1
        for lit in trail[mark:]:
            v = abs(lit)
            assign[v] = 0
            if v < lowest:
                lowest = v
        del trail[mark:]
        return lowest

    for clause in clauses:
        if not clause:
            return None
    for ci, clause in enumerate(clauses):
        if len(clause) == 1:
            if not enqueue(clause[0]):
                return None
        else:
            watches.setdefault(clause[0], []).append(ci)
            watches.setdefault(clause[1], []).append(ci)
    if not propagate():
        return None

    next_var = 1
    while True:
        while next_var <= nvars and assign[next_var] != 0:
            next_var += 1
        if next_var > nvars:
            return [False] + [assign[v] == 1 for v in range(1, nvars + 1)]
        decisions.append([len(trail), -next_var, 0])
        ok = enqueue(-next_var) and propagate()
        while not ok:
            while decisions and decisions[-1][2]:
                mark = decisions.pop()
                freed = unwind(mark[0])
                if freed < next_var:
                    next_var = freed
            if not decisions:
                return None
            mark = decisions[-1]
            freed = unwind(mark[0])
            if freed < next_var:
                next_var = freed
            mark[1] = -mark[1]
            mark[2] = 1
            ok = enqueue(mark[1]) and propagate()
