"""Verification-condition generation for the proof commands."""

from __future__ import annotations

from ..elaboration import TypedModule
from ..elaboration.rewrite import walk_stmts
from ..frontend import ast as A
from ..frontend.ast import PROOF_COMMANDS
from ..symexec import (Translator, arbitrary_state, assert_facts, collect_obligations, init_state, run_procedure,
                       state_facts, unroll)
from ..symexec.engine import RawObligation
from ..terms import FALSE
from ..vc import VerificationCondition
from .compose import prepare


def _arity(m: TypedModule) -> int:
    return m.arity or 1


def _vc(o: RawObligation, m, command: str, envs, start: str = "init") -> VerificationCondition:
    return VerificationCondition(o.name, list(o.assumptions), o.goal, command, o.spec, o.step, _arity(m),
                                 envs, o.kind, False, start)


def bmc(m: TypedModule, k: int) -> list[VerificationCondition]:
    """One condition per inline assert and per invariant at each of steps 0..k."""
    m = prepare(m)
    states = unroll(m, k)
    envs = [s.env for s in states]
    return [_vc(o, m, "bmc", envs[:o.step + 1]) for o in collect_obligations(states, m)]


def _dedupe_names(vcs: list[VerificationCondition]) -> list[VerificationCondition]:
    seen: dict[str, int] = {}
    for vc in vcs:
        n = seen.get(vc.name, 0) + 1
        seen[vc.name] = n
        if n > 1:
            stem, _, at = vc.name.rpartition("@")
            vc.name = f"{stem}_{n}@{at}"
    return vcs


def induct(m: TypedModule, k: int = 1) -> list[VerificationCondition]:
    """k-induction: base cases at steps 0..k-1 from init, then one inductive step.

    The step starts from a state of fresh constants, assumes every invariant
    on k consecutive states (and the inline asserts of the transitions
    between them), and checks the invariants and the asserts of transition k.
    """
    if k < 1:
        raise ValueError("induction needs k >= 1")
    m = prepare(m)
    command = "induction" if k == 1 else f"kinduction({k})"
    base_states = unroll(m, k - 1)
    envs = [s.env for s in base_states]
    vcs = [_vc(o, m, command, envs[:o.step + 1]) for o in collect_obligations(base_states, m)]

    tr = Translator(m)
    states = unroll(m, k, arbitrary_state(m, 0))
    envs = [s.env for s in states]
    facts: list = []
    for i, s in enumerate(states[:k]):
        facts += s.assumptions
        if i > 0:
            facts += assert_facts(s)
        facts += [tr.expr(inv.expr, s.env) for inv in m.invariants]
    last = states[k]
    for a in last.asserts:
        vcs.append(VerificationCondition(f"{a.spec}@step", facts + last.axioms + a.assumptions, a.goal, command,
                                         a.spec, k, _arity(m), envs, a.kind, False, "arbitrary"))
    post = facts + last.assumptions
    for inv in m.invariants:
        kind = "hyperinvariant" if inv.arity > 1 else "invariant"
        vcs.append(VerificationCondition(f"{inv.name}@step", list(post), tr.expr(inv.expr, last.env), command,
                                         inv.name, k, _arity(m), envs, kind, False, "arbitrary"))
    return _dedupe_names(vcs)


def verify_procedure(m: TypedModule, proc: str) -> list[VerificationCondition]:
    """Contract check from a fresh pre-state: one condition per ensures plus body asserts."""
    run = run_procedure(m, proc)
    names = {v.name for v in m.variables}
    p = m.procedures[proc]
    shown = names | {n for n, _ in tuple(p.params) + tuple(p.returns)}
    envs = [{n: t for n, t in run.pre.items() if n in shown}, {n: t for n, t in run.post.items() if n in shown}]
    return [_vc(o, m, f"verify({proc})", envs, "procedure") for o in run.obligations]


def check_sat(m: TypedModule) -> list[VerificationCondition]:
    """Satisfiability of the initial state with all axioms and assumes (observability)."""
    m = prepare(m)
    s = init_state(m)
    return [VerificationCondition("check_sat@0", state_facts([s]), FALSE, "check_sat", "check_sat", 0, _arity(m),
                                  [s.env], "observe", True, "init")]


def _observability_only(m: TypedModule) -> bool:
    """Axioms but nothing to prove: bmc degenerates to an observability query."""
    has_specs = m.invariants or m.hyperinvariants or any(
        isinstance(s, A.Assert) for s in walk_stmts(m.init + m.next))
    return bool(m.axioms or m.hyperaxioms) and not has_specs


def command_vcs(m: TypedModule, cmd) -> list[VerificationCondition]:
    """Conditions generated by one proof command of a control block."""
    if cmd.name == "bmc" and _observability_only(m):
        return check_sat(m)
    if cmd.name == "bmc":
        return bmc(m, int(cmd.args[0]) if cmd.args else 1)
    if cmd.name == "induction":
        return induct(m, int(cmd.args[0]) if cmd.args else 1)
    if cmd.name == "kinduction":
        return induct(m, int(cmd.args[0]))
    if cmd.name == "verify":
        return verify_procedure(m, str(cmd.args[0]))
    if cmd.name == "check_sat":
        return check_sat(m)
    raise ValueError(f"{cmd.name} is not a proof command")


def control_vcs(m: TypedModule) -> list[VerificationCondition]:
    """Every condition generated by the proof commands of the control block, in order."""
    out: list[VerificationCondition] = []
    for cmd in m.control:
        if cmd.name in PROOF_COMMANDS:
            out += command_vcs(m, cmd)
    return out
