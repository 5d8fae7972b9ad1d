"""Concrete reference interpreter working directly on surface statements.

It is deliberately separate from the symbolic engine so the two can be
compared. It accepts flattened modules before lowering (calls to bodied
procedures, for, while and case are executed directly) as well as fully
elaborated ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from ..elaboration import TypedModule
from ..elaboration.passes import ground_expr, int_expr
from ..elaboration.rewrite import subst_stmts
from ..frontend import ast as A
from ..terms import DivisionByZero, EvalError, Sort, smt_div, smt_mod
from ..values import ArrayValue, default_value

MAX_LOOP = 100_000


@dataclass(frozen=True)
class BV:
    """Bitvector value with its width (unsigned representation)."""

    value: int
    width: int

    @classmethod
    def of(cls, v: int, w: int) -> "BV":
        return cls(v % (1 << w), w)

    @property
    def mask(self) -> int:
        return (1 << self.width) - 1


def _plain(v):
    if isinstance(v, BV):
        return v.value
    if isinstance(v, ArrayValue):
        return ArrayValue.make(_plain(v.default), [(_plain(k), _plain(x)) for k, x in v.stores])
    return v


def _typed(v, sort: Sort):
    """Lift a plain value to the interpreter's representation."""
    if sort.kind == "BitVec":
        return BV.of(int(v), sort.width)
    if sort.kind == "Real":
        return Fraction(v)
    if sort.kind == "Array" and isinstance(v, ArrayValue):
        return ArrayValue.make(_typed(v.default, sort.elem),
                               [(_typed(k, sort.index), _typed(x, sort.elem)) for k, x in v.stores])
    return v


class _Stop(Exception):
    """Raised by ``assume false``-style dead ends inside a block."""


@dataclass
class ConcreteTrace:
    states: list[dict] = field(default_factory=list)
    failures: list[tuple[int, str]] = field(default_factory=list)
    assume_violations: list[tuple[int, str]] = field(default_factory=list)

    def values(self, var: str) -> list:
        return [s[var] for s in self.states]


class _Interp:
    def __init__(self, m: TypedModule, free: Mapping[str, object], funcs):
        self.m = m
        self.free = free
        self.funcs = funcs
        self.sorts = {v.name: v.sort for v in m.variables}
        self.trace = ConcreteTrace()
        self.step = 0

    # -- values ---------------------------------------------------------

    def fresh(self, name: str, sort: Sort, tag: str = ""):
        key = f"{name}@{self.step}" + (f"!{tag}" if tag else "")
        if key in self.free:
            return _typed(self.free[key], sort)
        return _typed(default_value(sort), sort)

    def call_func(self, name: str, args: list):
        f = self.m.functions[name]
        if self.funcs is None:
            raise EvalError(f"no interpretation for function {name}")
        out = self.funcs(name, tuple(_plain(a) for a in args), f.ret)
        return _typed(out, f.ret)

    # -- expressions ----------------------------------------------------

    def expr(self, e: A.Expr, env: Mapping, old: Mapping | None = None, scope: Mapping | None = None):
        scope = scope or {}
        ev = lambda x: self.expr(x, env, old, scope)  # noqa: E731
        if isinstance(e, A.BoolLit):
            return e.value
        if isinstance(e, A.IntLit):
            return e.value
        if isinstance(e, A.RealLit):
            return Fraction(e.value)
        if isinstance(e, A.BVLit):
            return BV.of(e.value, e.width)
        if isinstance(e, A.Ident):
            if e.name in scope:
                return scope[e.name]
            if e.name in env:
                return env[e.name]
            if e.name in self.m.enum_members:
                return e.name
            raise EvalError(f"no value for {e.name}")
        if isinstance(e, A.TraceIdent):
            return env[f"{e.name}.{e.index}"]
        if isinstance(e, A.Old):
            return old[e.name]
        if isinstance(e, A.Unary):
            a = ev(e.arg)
            if e.op == "!":
                return not a
            if e.op == "~":
                return BV.of(~a.value, a.width)
            return BV.of(-a.value, a.width) if isinstance(a, BV) else -a
        if isinstance(e, A.Binary):
            if e.op == "&&":
                return bool(ev(e.lhs)) and bool(ev(e.rhs))
            if e.op == "||":
                return bool(ev(e.lhs)) or bool(ev(e.rhs))
            if e.op == "==>":
                return (not ev(e.lhs)) or bool(ev(e.rhs))
            return self.binary(e.op, ev(e.lhs), ev(e.rhs))
        if isinstance(e, A.Ite):
            return ev(e.then) if ev(e.cond) else ev(e.else_)
        if isinstance(e, A.Apply):
            args = [ev(a) for a in e.args]
            d = self.m.defines.get(e.func)
            if d is not None:
                return self.expr(d.body, env, None, {n: a for (n, _), a in zip(d.params, args)})
            return self.call_func(e.func, args)
        if isinstance(e, A.Select):
            return ev(e.array).select(ev(e.index))
        if isinstance(e, A.Store):
            return ev(e.array).store(ev(e.index), ev(e.value))
        if isinstance(e, A.Extract):
            a = ev(e.arg)
            w = e.hi - e.lo + 1
            return BV.of(a.value >> e.lo, w)
        if isinstance(e, A.FiniteQuant):
            return ev(ground_expr(e, self.m.groups))
        if isinstance(e, A.Quant):
            sorts = [self.m.resolve(t) for _, t in e.bindings]
            names = [n for n, _ in e.bindings]
            doms = [self.domain(s) for s in sorts]
            hits = (self.expr(e.body, env, old, {**scope, **dict(zip(names, c))})
                    for c in itertools.product(*doms))
            return all(hits) if e.kind == "forall" else any(hits)
        raise EvalError(f"cannot evaluate {type(e).__name__}")

    @staticmethod
    def domain(s: Sort):
        if s.kind == "Bool":
            return [False, True]
        if s.kind == "Enum":
            return list(s.members)
        if s.kind == "BitVec" and s.width <= 8:
            return [BV(i, s.width) for i in range(1 << s.width)]
        raise EvalError(f"quantifier over infinite sort {s}")

    @staticmethod
    def binary(op: str, a, b):
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        if op == "<==>":
            return bool(a) == bool(b)
        if isinstance(a, BV):
            w, x, y = a.width, a.value, b.value
            if op == "++":
                return BV.of((x << b.width) | y, w + b.width)
            if op in ("<", "<=", ">", ">="):
                return {"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op]
            if op == "+":
                return BV.of(x + y, w)
            if op == "-":
                return BV.of(x - y, w)
            if op == "*":
                return BV.of(x * y, w)
            if op in ("/", "div"):
                return BV(a.mask, w) if y == 0 else BV.of(x // y, w)
            if op == "mod":
                return a if y == 0 else BV.of(x % y, w)
            if op == "&":
                return BV(x & y, w)
            if op == "|":
                return BV(x | y, w)
            if op == "^":
                return BV(x ^ y, w)
        if isinstance(a, bool):
            if op == "&":
                return a and b
            if op == "|":
                return a or b
            if op == "^":
                return a != b
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "div":
            return smt_div(a, b)
        if op == "mod":
            return smt_mod(a, b)
        if op == "/":
            if b == 0:
                raise DivisionByZero("real division by zero")
            return Fraction(a) / Fraction(b)
        raise EvalError(f"unsupported operator {op}")

    # -- statements -----------------------------------------------------

    def block(self, body, env: dict, primed: dict | None, old=None):
        for s in body:
            self.stmt(s, env, primed, old)

    def stmt(self, s, env: dict, primed, old):
        ex = lambda e: self.expr(e, env, old)  # noqa: E731
        if isinstance(s, A.Assign):
            v = ex(s.value)
            if s.primed:
                primed[s.target] = v
            else:
                env[s.target] = v
        elif isinstance(s, A.Havoc):
            sort = self.sorts[s.name]
            env[s.name] = self.fresh(s.name, sort, s.tag or "h")
        elif isinstance(s, A.LocalVar):
            sort = self.m.resolve(s.type)
            self.sorts[s.name] = sort
            env[s.name] = self.fresh(s.name, sort, s.tag or "l")
        elif isinstance(s, A.Assume):
            if not ex(s.expr):
                raise _Stop()
        elif isinstance(s, A.Assert):
            if not ex(s.expr):
                self.trace.failures.append((self.step, s.label or f"assert_l{s.span.line}"))
        elif isinstance(s, A.If):
            self.block(s.then if ex(s.cond) else s.else_, env, primed, old)
        elif isinstance(s, A.Case):
            for g, body in s.arms:
                if ex(g):
                    self.block(body, env, primed, old)
                    break
        elif isinstance(s, A.For):
            lo, hi = ex(s.lo), ex(s.hi)
            for i in range(lo, hi):
                self.block(_bind(s.body, s.var, i), env, primed, old)
        elif isinstance(s, A.While):
            self.loop(s, env, primed, old)
        elif isinstance(s, A.Call):
            self.call(s, env)
        else:
            raise EvalError(f"cannot execute {type(s).__name__}")

    def loop(self, s: A.While, env, primed, old):
        def check(when):
            for idx, (label, e) in enumerate(s.invariants):
                if not self.expr(e, env, old):
                    base = label or f"loopinv_L{s.span.line}_{idx}"
                    self.trace.failures.append((self.step, f"{base}_{when}"))

        check("entry")
        for _ in range(MAX_LOOP):
            if not self.expr(s.cond, env, old):
                return
            self.block(s.body, env, primed, old)
            check("exit")
        raise EvalError("loop iteration bound exceeded")

    def call(self, s: A.Call, env: dict):
        p = self.m.procedures[s.proc]
        if p.body is None:
            raise EvalError(f"procedure {p.name} has no body to execute")
        args = [self.expr(a, env) for a in s.args]
        frame = dict(env)
        for (n, _), a in zip(p.params, args):
            frame[n] = a
        for n, t in p.returns:
            frame[n] = _typed(default_value(self.m.resolve(t)), self.m.resolve(t))
        self.block(p.body, frame, None, dict(env))
        for v in p.modifies:
            env[v] = frame[v]
        for lhs, (r, _) in zip(s.lhs, p.returns):
            env[lhs] = frame[r]

    # -- states ---------------------------------------------------------

    def axioms_hold(self, env):
        for a in self.m.axioms:
            try:
                ok = self.expr(a.expr, env)
            except EvalError:
                continue
            if not ok:
                self.trace.assume_violations.append((self.step, a.name))


def _bind(body, var: str, value: int):
    return subst_stmts(body, {var: int_expr(value)})


def concrete_interpret(m: TypedModule, inputs=None, k: int = 0, free: Mapping[str, object] | None = None,
                       start: Mapping[str, object] | None = None,
                       funcs: Callable[[str, tuple, Sort], object] | None = None) -> ConcreteTrace:
    """Run ``m`` for ``k`` steps on concrete values.

    ``inputs[i]`` gives input values of state ``i``. ``free`` supplies values
    for everything else left open, keyed like symbolic constants
    (``x@0`` for an uninitialised variable, ``v@i!tag`` for havocs and
    locals); missing entries take the sort's default. ``start`` replaces the
    init block with a given state 0. Division by zero raises
    :class:`DivisionByZero` with the step index in the message.
    """
    inputs = list(inputs or [])
    it = _Interp(m, dict(free or {}), funcs)

    def input_values(i, env):
        given = inputs[i] if i < len(inputs) else {}
        for v in m.variables:
            if v.kind == "input":
                env[v.name] = _typed(given[v.name], v.sort) if v.name in given else it.fresh(v.name, v.sort)

    def record(env):
        state = {v.name: env[v.name] for v in m.variables}
        it.axioms_hold(state)
        it.trace.states.append({n: _plain(x) for n, x in state.items()})
        return state

    try:
        if start is not None:
            env = {v.name: _typed(start[v.name], v.sort) if v.name in start else it.fresh(v.name, v.sort)
                   for v in m.variables}
            input_values(0, env)
        else:
            env = {v.name: it.fresh(v.name, v.sort) for v in m.variables}
            input_values(0, env)
            it.block(m.init, env, None)
        state = record(env)
        for i in range(1, k + 1):
            it.step = i
            work = dict(state)
            primed: dict = {}
            it.block(m.next, work, primed)
            nxt = {v.name: primed.get(v.name, work[v.name]) for v in m.variables}
            input_values(i, nxt)
            state = record(nxt)
    except _Stop:
        it.trace.assume_violations.append((it.step, "assume"))
    except DivisionByZero as exc:
        raise DivisionByZero(f"step {it.step}: {exc}") from None
    return it.trace


def eval_expr(m: TypedModule, e: A.Expr, state: Mapping[str, object], funcs=None, old=None):
    """Evaluate a surface expression in a concrete (plain-valued) state."""
    it = _Interp(m, {}, funcs)
    env = {n: _typed(v, it.sorts[n]) if n in it.sorts else v for n, v in state.items()}
    olds = None if old is None else {n: _typed(v, it.sorts[n]) if n in it.sorts else v for n, v in old.items()}
    return _plain(it.expr(e, env, olds))
