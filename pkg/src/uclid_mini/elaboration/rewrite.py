"""Renaming and substitution over surface syntax trees."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from typing import Callable, Mapping

from ..diagnostics import fail
from ..frontend import ast as A


def map_children(node, fn: Callable):
    """Rebuild ``node`` with ``fn`` applied to every child node (one level)."""
    changes = {}
    for f in fields(node):
        if f.name == "span":
            continue
        old = getattr(node, f.name)
        new = _map_value(old, fn)
        if new is not old:
            changes[f.name] = new
    return replace(node, **changes) if changes else node


def _map_value(value, fn):
    if isinstance(value, A.Node):
        return fn(value)
    if isinstance(value, tuple):
        items = tuple(_map_value(v, fn) for v in value)
        return value if all(a is b for a, b in zip(items, value)) else items
    return value


@dataclass
class Renaming:
    """Name substitution applied consistently to expressions and statements.

    ``vars`` maps identifiers to replacement expressions (an Ident for a
    plain rename, any expression for an input-port binding), ``funcs``
    renames applied functions and called procedures, ``groups`` renames
    quantified groups and ``instances`` renames ``next(inst)`` targets.
    """

    vars: Mapping[str, A.Expr] = field(default_factory=dict)
    funcs: Mapping[str, str] = field(default_factory=dict)
    groups: Mapping[str, str] = field(default_factory=dict)
    instances: Mapping[str, str] = field(default_factory=dict)

    def name(self, n: str, span=None) -> str:
        """New name for an assignable identifier."""
        if n not in self.vars:
            return n
        e = self.vars[n]
        if isinstance(e, A.Ident):
            return e.name
        fail("IllegalAssignment", f"{n!r} is bound to an expression and cannot be assigned", span or e.span)

    def expr(self, e: A.Expr, shadow: frozenset = frozenset()) -> A.Expr:
        if isinstance(e, A.Ident):
            if e.name in self.vars and e.name not in shadow:
                new = self.vars[e.name]
                return replace(new, span=e.span) if isinstance(new, A.Ident) else new
            return e
        if isinstance(e, (A.Primed, A.Old)):
            if e.name in self.vars and e.name not in shadow:
                return replace(e, name=self.name(e.name, e.span))
            return e
        if isinstance(e, A.TraceIdent):
            if e.name in self.vars and e.name not in shadow:
                return replace(e, name=self.name(e.name, e.span))
            return e
        if isinstance(e, A.Apply):
            args = tuple(self.expr(a, shadow) for a in e.args)
            return replace(e, func=self.funcs.get(e.func, e.func), args=args)
        if isinstance(e, A.FiniteQuant):
            body = self.expr(e.body, shadow | {e.var})
            return replace(e, group=self.groups.get(e.group, e.group), body=body)
        if isinstance(e, A.Quant):
            body = self.expr(e.body, shadow | {n for n, _ in e.bindings})
            return replace(e, body=body)
        return map_children(e, lambda c: self.expr(c, shadow))

    def stmts(self, body, shadow: frozenset = frozenset()) -> tuple[A.Stmt, ...]:
        return tuple(self.stmt(s, shadow) for s in body)

    def stmt(self, s: A.Stmt, shadow: frozenset = frozenset()) -> A.Stmt:
        ex = lambda e: self.expr(e, shadow)  # noqa: E731
        if isinstance(s, A.Assign):
            return replace(s, target=self.name(s.target, s.span), value=ex(s.value))
        if isinstance(s, A.Havoc):
            return replace(s, name=self.name(s.name, s.span))
        if isinstance(s, A.LocalVar):
            return replace(s, name=self.name(s.name, s.span))
        if isinstance(s, A.Assert):
            return replace(s, expr=ex(s.expr))
        if isinstance(s, A.Assume):
            return replace(s, expr=ex(s.expr))
        if isinstance(s, A.If):
            return replace(s, cond=ex(s.cond), then=self.stmts(s.then, shadow),
                           else_=self.stmts(s.else_, shadow))
        if isinstance(s, A.Case):
            return replace(s, arms=tuple((ex(g), self.stmts(b, shadow)) for g, b in s.arms))
        if isinstance(s, A.For):
            inner = shadow | {s.var}
            return replace(s, lo=ex(s.lo), hi=ex(s.hi), body=self.stmts(s.body, inner))
        if isinstance(s, A.While):
            invs = tuple((label, ex(e)) for label, e in s.invariants)
            return replace(s, cond=ex(s.cond), invariants=invs, body=self.stmts(s.body, shadow))
        if isinstance(s, A.Call):
            lhs = tuple(self.name(n, s.span) for n in s.lhs)
            return replace(s, lhs=lhs, proc=self.funcs.get(s.proc, s.proc),
                           args=tuple(ex(a) for a in s.args))
        if isinstance(s, A.NextInst):
            return replace(s, instance=self.instances.get(s.instance, s.instance))
        raise TypeError(f"unexpected statement {type(s).__name__}")


def rename_vars(mapping: Mapping[str, str]) -> Renaming:
    return Renaming(vars={k: A.Ident(v) for k, v in mapping.items()})


def subst_expr(e: A.Expr, mapping: Mapping[str, A.Expr]) -> A.Expr:
    return Renaming(vars=mapping).expr(e)


def subst_stmts(body, mapping: Mapping[str, A.Expr]):
    return Renaming(vars=mapping).stmts(body)


def walk_stmts(body):
    """Every statement in ``body``, nested ones included, in source order."""
    for s in body:
        yield s
        if isinstance(s, A.If):
            yield from walk_stmts(s.then)
            yield from walk_stmts(s.else_)
        elif isinstance(s, A.Case):
            for _, b in s.arms:
                yield from walk_stmts(b)
        elif isinstance(s, (A.For, A.While)):
            yield from walk_stmts(s.body)


def stmt_exprs(s: A.Stmt):
    """Expressions directly held by a statement (not nested statements)."""
    if isinstance(s, A.Assign):
        return [s.value]
    if isinstance(s, (A.Assert, A.Assume)):
        return [s.expr]
    if isinstance(s, A.If):
        return [s.cond]
    if isinstance(s, A.Case):
        return [g for g, _ in s.arms]
    if isinstance(s, A.For):
        return [s.lo, s.hi]
    if isinstance(s, A.While):
        return [s.cond] + [e for _, e in s.invariants]
    if isinstance(s, A.Call):
        return list(s.args)
    return []


def map_stmt_exprs(body, fn: Callable[[A.Expr], A.Expr]):
    """Apply ``fn`` to every expression in a statement list (recursively)."""
    out = []
    for s in body:
        if isinstance(s, A.Assign):
            s = replace(s, value=fn(s.value))
        elif isinstance(s, (A.Assert, A.Assume)):
            s = replace(s, expr=fn(s.expr))
        elif isinstance(s, A.If):
            s = replace(s, cond=fn(s.cond), then=map_stmt_exprs(s.then, fn),
                        else_=map_stmt_exprs(s.else_, fn))
        elif isinstance(s, A.Case):
            s = replace(s, arms=tuple((fn(g), map_stmt_exprs(b, fn)) for g, b in s.arms))
        elif isinstance(s, A.For):
            s = replace(s, lo=fn(s.lo), hi=fn(s.hi), body=map_stmt_exprs(s.body, fn))
        elif isinstance(s, A.While):
            s = replace(s, cond=fn(s.cond), invariants=tuple((n, fn(e)) for n, e in s.invariants),
                        body=map_stmt_exprs(s.body, fn))
        elif isinstance(s, A.Call):
            s = replace(s, args=tuple(fn(a) for a in s.args))
        out.append(s)
    return tuple(out)


def assigned_names(body) -> list[str]:
    """Names written (assigned, havocked or call targets), first-write order."""
    out: list[str] = []
    for s in walk_stmts(body):
        names = []
        if isinstance(s, (A.Assign, A.Havoc)):
            names = [s.target if isinstance(s, A.Assign) else s.name]
        elif isinstance(s, A.Call):
            names = list(s.lhs)
        for n in names:
            if n not in out:
                out.append(n)
    return out
