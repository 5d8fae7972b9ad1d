"""SMT-LIB emission, solver processes, model parsing and the oracle refinement loop."""

from .emit import (UnsupportedSort, declarations, emit_query, emit_smtlib, ordered_symbols, sort_declarations,
                   vc_assertions)
from .model import FuncArray, ModelFunction, ModelParseError, SmtModel, parse_literal, parse_model, parse_sort
from .sexp import Quoted, SexpError, parse_all, parse_one, to_text
from .smto import (DEFAULT_BUDGET, OracleBinding, OracleInvocationError, OracleSession, SmtoResult, bindings_for,
                   oracle_points, smto_check)
from .solver import (SolverConfig, SolveResult, SolverProtocolError, SolverSpawnError, default_solver,
                     default_sygus_solver, run_script, solve, solve_terms, write_emitted)
from .trace import extract_trace, model_value

__all__ = [
    "DEFAULT_BUDGET", "FuncArray", "ModelFunction", "ModelParseError", "OracleBinding", "OracleInvocationError",
    "OracleSession", "Quoted", "SexpError", "SmtModel", "SmtoResult", "SolveResult", "SolverConfig",
    "SolverProtocolError", "SolverSpawnError", "UnsupportedSort", "bindings_for", "declarations",
    "default_solver", "default_sygus_solver", "emit_query", "emit_smtlib", "extract_trace", "model_value",
    "oracle_points", "ordered_symbols", "parse_all", "parse_literal", "parse_model", "parse_one", "parse_sort",
    "run_script", "smto_check", "solve", "solve_terms", "sort_declarations", "to_text", "vc_assertions",
    "write_emitted",
]
