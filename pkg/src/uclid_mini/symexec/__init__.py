"""Symbolic execution of elaborated modules and a concrete reference interpreter."""

from .engine import (BlockExec, ProcedureRun, RawObligation, SymbolicState, arbitrary_state, assert_facts,
                     collect_obligations, fresh, init_state, run_procedure, state_facts, step, unroll)
from .interp import BV, ConcreteTrace, concrete_interpret, eval_expr
from .translate import Translator

__all__ = [
    "BV", "BlockExec", "ConcreteTrace", "ProcedureRun", "RawObligation", "SymbolicState", "Translator",
    "arbitrary_state", "assert_facts", "collect_obligations", "concrete_interpret", "eval_expr", "fresh",
    "init_state", "run_procedure", "state_facts", "step", "unroll",
]
