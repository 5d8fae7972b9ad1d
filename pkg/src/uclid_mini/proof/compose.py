"""Self-composition: n lockstep copies of a module for hyperproperties."""

from __future__ import annotations

from dataclasses import replace

from ..diagnostics import fail
from ..elaboration import Spec, TypedModule, number_tags
from ..elaboration.rewrite import Renaming, map_children, walk_stmts
from ..frontend import ast as A


def _free_idents(e: A.Expr, out: set):
    if isinstance(e, (A.Ident, A.Old, A.TraceIdent)):
        out.add(e.name)
    for c in A.children(e):
        _free_idents(c, out)
    return out


def _untrace(e: A.Expr, n: int) -> A.Expr:
    """Replace ``x.j`` trace references by the composed variable name."""
    if isinstance(e, A.TraceIdent):
        if e.index < 1 or e.index > n:
            fail("IndexOutOfArity", f"{e.name}.{e.index} exceeds composition arity {n}", e.span)
        return A.Ident(f"{e.name}.{e.index}", span=e.span)
    return map_children(e, lambda c: _untrace(c, n))


def _relabel(body, j: int) -> tuple:
    out = []
    for s in body:
        if isinstance(s, A.Assert):
            label = s.label or f"assert_l{s.span.line}"
            s = replace(s, label=f"{label}.{j}")
        elif isinstance(s, A.If):
            s = replace(s, then=_relabel(s.then, j), else_=_relabel(s.else_, j))
        elif isinstance(s, A.Case):
            s = replace(s, arms=tuple((g, _relabel(b, j)) for g, b in s.arms))
        elif isinstance(s, (A.For, A.While)):
            s = replace(s, body=_relabel(s.body, j))
        out.append(s)
    return tuple(out)


def self_compose(m: TypedModule, n: int) -> TypedModule:
    """Compose ``n`` renamed copies ``x.1 .. x.n`` stepped in lockstep.

    Hyperaxioms become axioms and hyperinvariants become invariants of the
    composed module (keeping their arity); ordinary specs are replicated
    per copy as ``name.j``. Procedures are dropped.
    """
    if n < 1:
        fail("IndexOutOfArity", f"composition arity must be at least 1, got {n}")
    if m.arity:
        fail("IllegalExpression", "module is already self-composed")
    var_names = {v.name for v in m.variables}
    local_names = [s.name for s in walk_stmts(m.init + m.next) if isinstance(s, A.LocalVar)]
    stateful = {d.name for d in m.defines.values() if _free_idents(d.body, set()) & var_names}
    variables, init, nxt = [], [], []
    defines = {k: d for k, d in m.defines.items() if k not in stateful}
    invariants, axioms = [], []
    for j in range(1, n + 1):
        mapping = {v: A.Ident(f"{v}.{j}") for v in var_names}
        mapping.update({x: A.Ident(f"{x}__{j}") for x in local_names})
        ren = Renaming(vars=mapping, funcs={d: f"{d}.{j}" for d in stateful})
        variables += [replace(v, name=f"{v.name}.{j}", trace=j, base=v.name) for v in m.variables]
        init += ren.stmts(_relabel(m.init, j))
        nxt += ren.stmts(_relabel(m.next, j))
        for d in stateful:
            old = m.defines[d]
            body = ren.expr(old.body, frozenset(p for p, _ in old.params))
            name = f"{d}.{j}"
            defines[name] = replace(old, name=name, body=body, decl=replace(old.decl, name=name, body=body))
        invariants += [Spec(f"{s.name}.{j}", ren.expr(s.expr), 1, s.span) for s in m.invariants]
        axioms += [Spec(f"{s.name}.{j}", ren.expr(s.expr), 1, s.span) for s in m.axioms]
    axioms += [Spec(s.name, _untrace(s.expr, n), s.arity, s.span) for s in m.hyperaxioms]
    invariants += [Spec(s.name, _untrace(s.expr, n), s.arity, s.span) for s in m.hyperinvariants]
    out = m.replace(variables=tuple(variables), init=tuple(init), next=tuple(nxt), defines=defines,
                    procedures={}, invariants=tuple(invariants), hyperinvariants=(), axioms=tuple(axioms),
                    hyperaxioms=(), arity=n)
    return number_tags(out)


def prepare(m: TypedModule) -> TypedModule:
    """Compose a module with hyper specs at its largest declared arity; others pass through."""
    if m.arity or not (m.hyperinvariants or m.hyperaxioms):
        return m
    return self_compose(m, m.hyper_arity)
