from .ast import parse_fof, parse_fof_units, to_tptp, emit_problem, emit_axioms, count_operators, symbols
from .models import Model, Verdict, check_sat_bounded, eval_formula, SAT, UNSAT, UNKNOWN

__all__ = [
    "parse_fof", "parse_fof_units", "to_tptp", "emit_problem", "emit_axioms",
    "count_operators", "symbols", "Model", "Verdict", "check_sat_bounded",
    "eval_formula", "SAT", "UNSAT", "UNKNOWN",
]
