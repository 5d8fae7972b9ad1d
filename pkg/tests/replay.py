"""Replaying counterexample traces through the concrete interpreter."""

from uclid_mini.proof import prepare
from uclid_mini.symexec import concrete_interpret, eval_expr


def replay_violates(m, result) -> bool:
    """True when running ``m`` concretely along ``result.cex`` violates the reported spec."""
    vc, cex = result.vc, result.cex
    pm = prepare(m)
    inputs_vars = [v.name for v in pm.variables if v.kind == "input"]
    last = cex.steps[-1][0]
    inputs = [{n: cex.state(i)[n] for n in inputs_vars} for i, _ in cex.steps]
    start = cex.state(0) if vc.start == "arbitrary" else None
    trace = concrete_interpret(pm, inputs, last, free=cex.free, start=start)
    if trace.states[last] != cex.state(last):
        return False
    if vc.kind in ("invariant", "hyperinvariant"):
        (spec,) = [s for s in pm.invariants if s.name == vc.spec]
        return eval_expr(pm, spec.expr, trace.states[last]) is False
    return (last, vc.spec) in trace.failures
