"""Lowering passes: TypedModule in, TypedModule out.

Order used by :func:`uclid_mini.elaboration.elaborate`::

    flatten_instances -> inline_procedures -> eliminate_loops
        -> ground_finite_quantifiers -> number_tags
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..diagnostics import fail
from ..frontend import ast as A
from .model import Spec, TypedModule, Variable, resolve_type
from .rewrite import Renaming, assigned_names, map_children, map_stmt_exprs, rename_vars, subst_expr, subst_stmts, walk_stmts
from .typecheck import Program


# --- instances ---------------------------------------------------------------


@dataclass
class _Part:
    variables: list = field(default_factory=list)
    defines: dict = field(default_factory=dict)
    groups: dict = field(default_factory=dict)
    procedures: dict = field(default_factory=dict)
    init: list = field(default_factory=list)
    next: tuple = ()
    invariants: list = field(default_factory=list)
    hyperinvariants: list = field(default_factory=list)
    axioms: list = field(default_factory=list)
    hyperaxioms: list = field(default_factory=list)
    exports: dict = field(default_factory=dict)


def main_module(program: Program, name: str | None = None) -> str:
    if name is not None:
        if name not in program.modules:
            fail("UnknownIdentifier", f"no module named {name!r}")
        return name
    if "main" in program.modules:
        return "main"
    if len(program.modules) == 1:
        return next(iter(program.modules))
    fail("UnknownIdentifier", "several modules and none is named main")


def flatten_instances(program: Program, main: str | None = None) -> TypedModule:
    """Inline every instance into one flat module with ``inst.``-prefixed names."""
    top = main_module(program, main)
    part = _flatten(program, top, "", {}, ())
    info = program.modules[top]
    control = info.module.control
    m = TypedModule(
        name=top,
        path=program.path,
        type_decls=program.type_decls,
        sorts=dict(program.sorts),
        enum_members=dict(program.enum_members),
        variables=tuple(part.variables),
        functions=dict(program.functions),
        defines=part.defines,
        groups=part.groups,
        procedures=part.procedures,
        init=tuple(part.init),
        next=tuple(part.next),
        invariants=tuple(part.invariants),
        hyperinvariants=tuple(part.hyperinvariants),
        axioms=tuple(part.axioms),
        hyperaxioms=tuple(part.hyperaxioms),
    )
    if control is not None:
        m = m.replace(control=control.commands)
    return m


def _flatten(program: Program, modname: str, prefix: str, ports: dict, stack: tuple) -> _Part:
    info = program.modules[modname]
    mod = info.module
    part = _Part()
    ren = Renaming(vars={}, funcs={}, groups={}, instances={})
    decl_types = {}
    for d in mod.decls:
        if isinstance(d, A.VarDecl):
            for n in d.names:
                decl_types[n] = (d.kind, d.type)
    for n, (kind, t) in decl_types.items():
        if n in ports:
            ren.vars[n] = ports[n]
            continue
        if kind == "input" and prefix:
            fail("UnboundPort", f"input port {n!r} of instance {prefix[:-1]!r} is not bound", mod.span)
        ren.vars[n] = A.Ident(prefix + n)
        part.variables.append(Variable(prefix + n, resolve_type(t, program.sorts), kind, t, prefix[:-1]))
    if prefix:
        for n in info.defines:
            ren.funcs[n] = prefix + n
        for n in info.procedures:
            ren.funcs[n] = prefix + n
        for n in info.groups:
            ren.groups[n] = prefix + n

    child_next = {}
    child_init = []
    for d in mod.decls:
        if not isinstance(d, A.InstanceDecl):
            continue
        bound = {port: ren.expr(e) for port, e in d.bindings}
        sub = _flatten(program, d.module, f"{prefix}{d.name}.", bound, stack + (modname,))
        for n, e in sub.exports.items():
            ren.vars[f"{d.name}.{n}"] = e
        part.variables += sub.variables
        part.defines.update(sub.defines)
        part.groups.update(sub.groups)
        part.procedures.update(sub.procedures)
        child_init += sub.init
        child_next[d.name] = sub.next
        for attr in ("invariants", "hyperinvariants", "axioms", "hyperaxioms"):
            getattr(part, attr).extend(getattr(sub, attr))

    part.init = list(child_init)
    for d in mod.decls:
        if isinstance(d, A.DefineDecl):
            df = info.defines[d.name]
            body = ren.expr(df.body, frozenset(n for n, _ in df.params))
            name = prefix + d.name
            part.defines[name] = replace(df, name=name, body=body, decl=replace(d, name=name, body=body))
        elif isinstance(d, A.GroupDecl):
            g = info.groups[d.name]
            elems = tuple(ren.expr(e) for e in g.elems)
            name = prefix + d.name
            part.groups[name] = replace(g, name=name, elems=elems, decl=replace(d, name=name, elems=elems))
        elif isinstance(d, A.ProcedureDecl):
            shadow = frozenset(n for n, _ in d.params + d.returns)
            body = None if d.body is None else ren.stmts(d.body, shadow)
            part.procedures[prefix + d.name] = replace(
                d, name=prefix + d.name,
                requires=tuple(ren.expr(e, shadow) for e in d.requires),
                ensures=tuple(ren.expr(e, shadow) for e in d.ensures),
                modifies=tuple(ren.name(n, d.span) for n in d.modifies),
                body=body)
        elif isinstance(d, A.InitBlock):
            part.init += ren.stmts(d.body)
        elif isinstance(d, A.NextBlock):
            part.next = _expand_next(ren.stmts(d.body), child_next)
        elif isinstance(d, A.Invariant):
            part.invariants.append(Spec(prefix + d.name, ren.expr(d.expr), 1, d.span))
        elif isinstance(d, A.Axiom):
            part.axioms.append(Spec(prefix + d.name, ren.expr(d.expr), 1, d.span))
        elif isinstance(d, A.HyperInvariant):
            part.hyperinvariants.append(Spec(prefix + d.name, ren.expr(d.expr), d.arity, d.span))
        elif isinstance(d, A.HyperAxiom):
            part.hyperaxioms.append(Spec(prefix + d.name, ren.expr(d.expr), d.arity, d.span))
    part.exports = dict(ren.vars)
    return part


def _expand_next(body, table) -> tuple:
    out = []
    for s in body:
        if isinstance(s, A.NextInst):
            out.extend(table[s.instance])
        elif isinstance(s, A.If):
            out.append(replace(s, then=_expand_next(s.then, table), else_=_expand_next(s.else_, table)))
        elif isinstance(s, A.Case):
            out.append(replace(s, arms=tuple((g, _expand_next(b, table)) for g, b in s.arms)))
        else:
            out.append(s)
    return tuple(out)


# --- procedures --------------------------------------------------------------


def _replace_old(e: A.Expr, olds: dict) -> A.Expr:
    if isinstance(e, A.Old):
        return A.Ident(olds.get(e.name, e.name), span=e.span)
    return map_children(e, lambda c: _replace_old(c, olds))


class _Inliner:
    def __init__(self, m: TypedModule):
        self.m = m
        self.count = 0
        self.stack: list[str] = []

    def block(self, body) -> tuple:
        out = []
        for s in body:
            out.extend(self.stmt(s))
        return tuple(out)

    def stmt(self, s) -> list:
        if isinstance(s, A.Call):
            return self.inline(s)
        if isinstance(s, A.If):
            return [replace(s, then=self.block(s.then), else_=self.block(s.else_))]
        if isinstance(s, A.Case):
            return [replace(s, arms=tuple((g, self.block(b)) for g, b in s.arms))]
        if isinstance(s, (A.For, A.While)):
            return [replace(s, body=self.block(s.body))]
        return [s]

    def inline(self, call: A.Call) -> list:
        p = self.m.procedures[call.proc]
        if p.name in self.stack:
            chain = " -> ".join(self.stack + [p.name])
            fail("RecursiveProcedure", f"recursive procedure call {chain}", call.span)
        self.count += 1
        stem = f"__{p.name.replace('.', '_')}{self.count}_"
        sp = call.span
        names = {n: stem + n for n, _ in p.params + p.returns}
        out: list = []
        for (n, t), a in zip(p.params, call.args):
            out += [A.LocalVar(names[n], t, span=sp), A.Assign(names[n], False, a, span=sp)]
        if p.body is None:
            ren = rename_vars(names)
            for i, r in enumerate(p.requires):
                out.append(A.Assert(ren.expr(r), f"{p.name}_requires{i}".replace(".", "_"), "requires", span=sp))
            olds = {}
            for v in p.modifies:
                o = stem + "old_" + v.replace(".", "_")
                olds[v] = o
                out += [A.LocalVar(o, self.m.var(v).type, span=sp), A.Assign(o, False, A.Ident(v), span=sp)]
            out += [A.Havoc(v, span=sp) for v in p.modifies]
            out += [A.LocalVar(names[n], t, span=sp) for n, t in p.returns]
            out += [A.Assume(ren.expr(_replace_old(e, olds)), span=sp) for e in p.ensures]
        else:
            out += [A.LocalVar(names[n], t, span=sp) for n, t in p.returns]
            self.stack.append(p.name)
            body = self.block(p.body)
            self.stack.pop()
            for s in walk_stmts(body):
                if isinstance(s, A.LocalVar) and s.name not in names:
                    names[s.name] = stem + s.name
            out += rename_vars(names).stmts(body)
        for lhs, (r, _) in zip(call.lhs, p.returns):
            out.append(A.Assign(lhs, False, A.Ident(names[r]), span=sp))
        return out


def inline_procedures(m: TypedModule) -> TypedModule:
    """Replace every call by a fresh-renamed copy of the callee (or its contract)."""
    inl = _Inliner(m)
    procs = {}
    for name, p in m.procedures.items():
        if p.body is None:
            procs[name] = p
            continue
        inl.stack = [name]
        procs[name] = replace(p, body=inl.block(p.body))
    inl.stack = []
    return m.replace(init=inl.block(m.init), next=inl.block(m.next), procedures=procs)


# --- loops and case ----------------------------------------------------------


def _int_literal(e: A.Expr) -> int:
    if isinstance(e, A.IntLit):
        return e.value
    if isinstance(e, A.Unary) and e.op == "-" and isinstance(e.arg, A.IntLit):
        return -e.arg.value
    fail("NonLiteralForBound", "for-loop bounds must be integer literals", e.span)


def int_expr(v: int) -> A.Expr:
    return A.IntLit(v) if v >= 0 else A.Unary("-", A.IntLit(-v))


def _lower(body) -> tuple:
    out = []
    for s in body:
        if isinstance(s, A.For):
            lo, hi = _int_literal(s.lo), _int_literal(s.hi)
            for i in range(lo, hi):
                out.extend(_lower(subst_stmts(s.body, {s.var: int_expr(i)})))
        elif isinstance(s, A.While):
            out.extend(_lower_while(s))
        elif isinstance(s, A.Case):
            out.extend(_lower(_case_to_if(s)))
        elif isinstance(s, A.If):
            out.append(replace(s, then=_lower(s.then), else_=_lower(s.else_)))
        else:
            out.append(s)
    return tuple(out)


def _case_to_if(s: A.Case) -> tuple:
    chain: tuple = ()
    for guard, body in reversed(s.arms):
        chain = (A.If(guard, body, chain, span=s.span),)
    return chain


def _lower_while(s: A.While) -> list:
    if not s.invariants:
        fail("MissingLoopInvariant", "while loop needs at least one invariant", s.span)
    body = _lower(s.body)
    local = {x.name for x in walk_stmts(body) if isinstance(x, A.LocalVar)}
    modified = [n for n in assigned_names(body) if n not in local]
    invs = []
    for idx, (label, e) in enumerate(s.invariants):
        base = label or f"loopinv_L{s.span.line}_{idx}"
        invs.append((base, e))
    sp = s.span
    out: list = [A.Assert(e, f"{b}_entry", "loop-invariant", span=sp) for b, e in invs]
    out += [A.Havoc(n, span=sp) for n in modified]
    out += [A.Assume(e, span=sp) for _, e in invs]
    then = list(body)
    then += [A.Assert(e, f"{b}_exit", "loop-invariant", span=sp) for b, e in invs]
    then.append(A.Assume(A.BoolLit(False), span=sp))
    out.append(A.If(s.cond, tuple(then), (), span=sp))
    return out


def eliminate_loops(m: TypedModule) -> TypedModule:
    """Unroll for-loops, encode while-loops with their invariants, lower case."""
    procs = {n: p if p.body is None else replace(p, body=_lower(p.body)) for n, p in m.procedures.items()}
    return m.replace(init=_lower(m.init), next=_lower(m.next), procedures=procs)


# --- finite quantifiers ------------------------------------------------------


def _dedupe(elems) -> list:
    out, seen = [], set()
    for e in elems:
        key = A.strip_spans(e)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


def ground_expr(e: A.Expr, groups) -> A.Expr:
    if isinstance(e, A.FiniteQuant):
        body = ground_expr(e.body, groups)
        g = groups.get(e.group)
        if g is None:
            fail("UnknownGroup", f"unknown group {e.group!r}", e.span)
        forall = e.kind == "finite_forall"
        parts = [subst_expr(body, {e.var: el}) for el in _dedupe(g.elems)]
        if not parts:
            return A.BoolLit(forall, span=e.span)
        out = parts[0]
        for p in parts[1:]:
            out = A.Binary("&&" if forall else "||", out, p, span=e.span)
        return out
    return map_children(e, lambda c: ground_expr(c, groups))


def ground_finite_quantifiers(m: TypedModule) -> TypedModule:
    """Expand finite_forall / finite_exists over their groups."""
    g = lambda e: ground_expr(e, m.groups)  # noqa: E731
    specs = lambda xs: tuple(replace(s, expr=g(s.expr)) for s in xs)  # noqa: E731
    procs = {}
    for n, p in m.procedures.items():
        procs[n] = replace(p, requires=tuple(map(g, p.requires)), ensures=tuple(map(g, p.ensures)),
                           body=None if p.body is None else map_stmt_exprs(p.body, g))
    defines = {n: replace(d, body=g(d.body), decl=replace(d.decl, body=g(d.body))) for n, d in m.defines.items()}
    return m.replace(init=map_stmt_exprs(m.init, g), next=map_stmt_exprs(m.next, g), procedures=procs,
                     defines=defines, invariants=specs(m.invariants), hyperinvariants=specs(m.hyperinvariants),
                     axioms=specs(m.axioms), hyperaxioms=specs(m.hyperaxioms))


# --- fresh-constant tags -----------------------------------------------------


def number_tags(m: TypedModule) -> TypedModule:
    """Give every havoc / local declaration a module-unique tag.

    Symbolic execution and the concrete interpreter both name the fresh
    constant of such a statement ``var@step!tag``.
    """
    counter = [0]

    def block(body):
        out = []
        for s in body:
            if isinstance(s, (A.Havoc, A.LocalVar)):
                counter[0] += 1
                s = replace(s, tag=str(counter[0]))
            elif isinstance(s, A.If):
                s = replace(s, then=block(s.then), else_=block(s.else_))
            elif isinstance(s, A.Case):
                s = replace(s, arms=tuple((gd, block(b)) for gd, b in s.arms))
            elif isinstance(s, (A.For, A.While)):
                s = replace(s, body=block(s.body))
            out.append(s)
        return tuple(out)

    init = block(m.init)
    nxt = block(m.next)
    procs = {n: p if p.body is None else replace(p, body=block(p.body)) for n, p in m.procedures.items()}
    return m.replace(init=init, next=nxt, procedures=procs)
