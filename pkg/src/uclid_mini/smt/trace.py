"""Counterexample reconstruction from solver models."""

from __future__ import annotations

from ..terms import EvalError, Term, evaluate, symbols
from ..values import default_value
from ..vc import CexTrace, VerificationCondition
from .model import SmtModel


def model_value(model: SmtModel, term: Term):
    """Value of ``term`` in ``model``; constants the model omits take sort defaults."""
    return evaluate(term, model.constants, model.call, lambda t: default_value(t.sort))


def extract_trace(model: SmtModel, vc: VerificationCondition) -> CexTrace:
    consts = model.constants
    free = {}
    for t in symbols(vc.terms() + [v for env in vc.envs for v in env.values()]):
        name = t.value.name
        free[name] = consts[name] if name in consts else default_value(t.sort)
    steps = []
    defaulted = set()
    sorts = {}
    for i, env in enumerate(vc.envs):
        state = {}
        for var, term in env.items():
            sorts[var] = term.sort
            try:
                state[var] = evaluate(term, free, model.call)
            except EvalError:
                state[var] = default_value(term.sort)
                defaulted.add((i, var))
                continue
            if term.op == "sym" and term.value.name not in consts:
                defaulted.add((i, var))
        steps.append((i, state))
    return CexTrace(steps, vc.arity, vc.spec, defaulted, free, sorts)
