"""Symbolic execution of elaborated modules.

Blocks run against a working environment: unprimed reads and writes see
the latest value, primed assignments are deferred and committed when the
block ends. A variable without a primed assignment keeps its final working
value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..elaboration import TypedModule
from ..frontend import ast as A
from ..terms import SymConst, Term, guard, ite, not_, substitute, sym
from .translate import Translator


@dataclass
class RawObligation:
    name: str
    kind: str  # assert | requires | invariant | hyperinvariant | ensures | loop-invariant
    step: int
    goal: Term
    assumptions: list[Term] = field(default_factory=list)
    spec: str = ""  # label or spec name without the step suffix


@dataclass
class SymbolicState:
    """Variable values after ``step`` transitions.

    ``assumptions`` holds everything assumed while producing this state
    (guarded assume statements and axiom instances); ``axioms`` is the axiom
    part alone. ``asserts`` are inline assertions met on the way here, with
    only their local context as assumptions.
    """

    step: int
    env: dict[str, Term]
    assumptions: list[Term] = field(default_factory=list)
    axioms: list[Term] = field(default_factory=list)
    asserts: list[RawObligation] = field(default_factory=list)


def _frame(v: str, sort) -> Term:
    # stands for "whatever the variable holds when the block commits"
    return Term("sym", (), sort, SymConst(v, -1, 0, "frame"))


def fresh(m: TypedModule, name: str, step: int, tag: str = "") -> Term:
    v = m.var_map.get(name)
    if v is None:
        raise KeyError(name)
    return sym(name, step, v.sort, max(v.trace, 1), tag)


@dataclass
class _Branch:
    env: dict[str, Term]
    primed: dict[str, Term]
    pc: list[Term]


class BlockExec:
    """Runs one statement block, creating fresh constants at ``step``."""

    def __init__(self, m: TypedModule, env: dict[str, Term], step: int,
                 old: dict[str, Term] | None = None):
        self.m = m
        self.tr = Translator(m)
        self.step = step
        self.old = old
        self.start = _Branch(dict(env), {}, [])
        self.assumptions: list[Term] = []
        self.asserts: list[RawObligation] = []
        self.sorts = {v.name: v.sort for v in m.variables}
        self.traces = {v.name: max(v.trace, 1) for v in m.variables}

    def run(self, body) -> _Branch:
        b = self.start
        self.block(body, b)
        return b

    def commit(self, b: _Branch) -> dict[str, Term]:
        out = dict(b.env)
        for v, t in b.primed.items():
            out[v] = substitute(t, {_frame(v, t.sort): b.env[v]})
        return out

    def ex(self, e, b: _Branch) -> Term:
        return self.tr.expr(e, b.env, self.old)

    def block(self, body, b: _Branch):
        for s in body:
            self.stmt(s, b)

    def stmt(self, s, b: _Branch):
        if isinstance(s, A.Assign):
            val = self.ex(s.value, b)
            if s.primed:
                b.primed[s.target] = val
            else:
                b.env[s.target] = val
        elif isinstance(s, A.Havoc):
            sort = self.sorts.get(s.name) or b.env[s.name].sort
            b.env[s.name] = sym(s.name, self.step, sort, self.traces.get(s.name, 1), s.tag or "h")
        elif isinstance(s, A.LocalVar):
            sort = self.m.resolve(s.type)
            self.sorts[s.name] = sort
            b.env[s.name] = sym(s.name, self.step, sort, 1, s.tag or "l")
        elif isinstance(s, A.Assume):
            self.assumptions.append(guard(b.pc, self.ex(s.expr, b)))
        elif isinstance(s, A.Assert):
            label = s.label or f"assert_l{s.span.line}"
            ctx = list(self.assumptions) + list(b.pc)
            self.asserts.append(RawObligation(f"{label}@{self.step}", s.kind, self.step,
                                              self.ex(s.expr, b), ctx, label))
        elif isinstance(s, A.If):
            c = self.ex(s.cond, b)
            then = _Branch(dict(b.env), dict(b.primed), b.pc + [c])
            other = _Branch(dict(b.env), dict(b.primed), b.pc + [not_(c)])
            self.block(s.then, then)
            self.block(s.else_, other)
            self._merge(c, then, other, b)
        else:
            raise TypeError(f"{type(s).__name__} must be lowered before symbolic execution")

    def _merge(self, c: Term, t: _Branch, e: _Branch, into: _Branch):
        env = {}
        for k, tv in t.env.items():
            if k in e.env:
                env[k] = ite(c, tv, e.env[k])
            elif k in into.env:
                env[k] = tv
        into.env = env
        primed = {}
        for k in list(t.primed) + [k for k in e.primed if k not in t.primed]:
            sort = (t.primed.get(k) or e.primed[k]).sort
            tv = t.primed.get(k, _frame(k, sort))
            ev = e.primed.get(k, _frame(k, sort))
            primed[k] = ite(c, tv, ev)
        into.primed = primed


def _axioms(m: TypedModule, env) -> list[Term]:
    tr = Translator(m)
    return [tr.expr(a.expr, env) for a in m.axioms]


def _finish(m: TypedModule, step: int, env: dict[str, Term], ex: BlockExec) -> SymbolicState:
    state_env = {v.name: env[v.name] for v in m.variables}
    axioms = _axioms(m, state_env)
    return SymbolicState(step, state_env, ex.assumptions + axioms, axioms, ex.asserts)


def init_state(m: TypedModule) -> SymbolicState:
    env = {v.name: fresh(m, v.name, 0) for v in m.variables}
    ex = BlockExec(m, env, 0)
    b = ex.run(m.init)
    return _finish(m, 0, ex.commit(b), ex)


def arbitrary_state(m: TypedModule, step: int = 0) -> SymbolicState:
    """A state where every variable is a fresh constant (axioms still assumed)."""
    env = {v.name: fresh(m, v.name, step) for v in m.variables}
    axioms = _axioms(m, env)
    return SymbolicState(step, env, list(axioms), axioms, [])


def step(s: SymbolicState, m: TypedModule) -> SymbolicState:
    nxt = s.step + 1
    ex = BlockExec(m, s.env, nxt)
    b = ex.run(m.next)
    env = ex.commit(b)
    for v in m.variables:
        if v.kind == "input":
            env[v.name] = fresh(m, v.name, nxt)
    return _finish(m, nxt, env, ex)


def unroll(m: TypedModule, k: int, start: SymbolicState | None = None) -> list[SymbolicState]:
    states = [start if start is not None else init_state(m)]
    for _ in range(k):
        states.append(step(states[-1], m))
    return states


def _dedupe(obls: list[RawObligation]) -> list[RawObligation]:
    seen: dict[str, int] = {}
    for o in obls:
        n = seen.get(o.name, 0) + 1
        seen[o.name] = n
        if n > 1:
            stem, _, at = o.name.rpartition("@")
            o.name = f"{stem}_{n}@{at}"
    return obls


def collect_obligations(states: list[SymbolicState], m: TypedModule,
                        invariants: bool = True, asserts: bool = True) -> list[RawObligation]:
    """Obligations over contiguous states: inline asserts and every invariant per step.

    Each obligation carries the full set of facts it may rely on: everything
    assumed in earlier states, plus for asserts the axioms of the current
    state and the assumes met before the assert.
    """
    tr = Translator(m)
    out: list[RawObligation] = []
    prefix: list[Term] = []
    for s in states:
        if asserts:
            for a in s.asserts:
                out.append(RawObligation(a.name, a.kind, a.step, a.goal,
                                         prefix + s.axioms + a.assumptions, a.spec))
        prefix = prefix + s.assumptions
        if invariants:
            for inv in m.invariants:
                kind = "hyperinvariant" if inv.arity > 1 else "invariant"
                out.append(RawObligation(f"{inv.name}@{s.step}", kind, s.step,
                                         tr.expr(inv.expr, s.env), list(prefix), inv.name))
    return _dedupe(out)


def state_facts(states: list[SymbolicState]) -> list[Term]:
    return [t for s in states for t in s.assumptions]


def assert_facts(s: SymbolicState) -> list[Term]:
    """Inline asserts of a transition as facts (each under its own context)."""
    return [guard(a.assumptions, a.goal) for a in s.asserts]


@dataclass
class ProcedureRun:
    pre: dict[str, Term]
    post: dict[str, Term]
    assumptions: list[Term]
    obligations: list[RawObligation]


def run_procedure(m: TypedModule, name: str) -> ProcedureRun:
    """Execute a procedure body from a fresh pre-state at step 0."""
    p = m.procedures[name]
    tr = Translator(m)
    pre = {v.name: fresh(m, v.name, 0) for v in m.variables}
    for pn, pt in tuple(p.params) + tuple(p.returns):
        pre[pn] = sym(pn, 0, m.resolve(pt))
    facts = [tr.expr(r, pre) for r in p.requires] + _axioms(m, pre)
    ex = BlockExec(m, pre, 0, old=pre)
    b = ex.run(p.body or ())
    post = b.env
    obls = [RawObligation(o.name, o.kind, o.step, o.goal, facts + o.assumptions, o.spec)
            for o in ex.asserts]
    every = facts + ex.assumptions
    for i, e in enumerate(p.ensures):
        label = f"{name}.ensures{i}"
        obls.append(RawObligation(f"{label}@0", "ensures", 0, tr.expr(e, post, pre), list(every),
                                  label))
    return ProcedureRun(pre, post, every, _dedupe(obls))


__all__ = [
    "BlockExec", "ProcedureRun", "RawObligation", "SymbolicState", "arbitrary_state",
    "assert_facts", "collect_obligations", "fresh", "init_state", "run_procedure",
    "state_facts", "step", "unroll",
]
