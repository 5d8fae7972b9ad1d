"""Name resolution and type checking for parsed modules.

Errors are collected per declaration (first error in each declaration) so a
file with several independent mistakes reports all of them, in source order.
"""

from __future__ import annotations

from collections import ChainMap
from dataclasses import dataclass, field

from ..diagnostics import Diagnostic, ElaborationError, Span, fail
from ..frontend import ast as A
from ..terms import BOOL, INT, REAL, Sort, bv, enum, uninterp
from .model import Define, Function, Group, resolve_type

STATE_KINDS = ("var", "input", "output", "const")


@dataclass(frozen=True)
class Entry:
    kind: str  # var input output const | local param return loopvar bound | enum
    sort: Sort
    span: Span


@dataclass
class ModuleInfo:
    module: A.Module
    vars: dict[str, Entry] = field(default_factory=dict)
    qualified: dict[str, Entry] = field(default_factory=dict)  # own + instance variables
    defines: dict[str, Define] = field(default_factory=dict)
    groups: dict[str, Group] = field(default_factory=dict)
    procedures: dict[str, A.ProcedureDecl] = field(default_factory=dict)
    instances: dict[str, A.InstanceDecl] = field(default_factory=dict)


@dataclass
class Program:
    """Result of typechecking: shared tables plus per-module information."""

    modules: dict[str, ModuleInfo]
    sorts: dict[str, Sort]
    type_decls: tuple[A.TypeDecl, ...]
    enum_members: dict[str, Sort]
    functions: dict[str, Function]
    path: str = "<input>"


@dataclass
class Ctx:
    names: ChainMap
    hyper: int = 0  # declared arity while checking a hyper spec
    quantifiers: bool = False
    old: frozenset | None = None  # names usable under old(), None outside ensures

    def child(self, **kw) -> "Ctx":
        return Ctx(self.names.new_child(), **{**dict(hyper=self.hyper, quantifiers=self.quantifiers,
                                                      old=self.old), **kw})


def _mismatch(msg, span):
    fail("TypeMismatch", msg, span)


class Checker:
    def __init__(self, modules: list[A.Module]):
        self.modules = modules
        self.diags: list[Diagnostic] = []
        self.sorts: dict[str, Sort] = {}
        self.type_decls: list[A.TypeDecl] = []
        self.enum_members: dict[str, Sort] = {}
        self.functions: dict[str, Function] = {}
        self.infos: dict[str, ModuleInfo] = {}
        self.info: ModuleInfo | None = None

    def guarded(self, fn, *args):
        try:
            return fn(*args)
        except ElaborationError as err:
            self.diags.extend(err.diagnostics)
            return None

    # -- program-level tables ------------------------------------------------

    def run(self) -> Program:
        names = {}
        for m in self.modules:
            if m.name in names:
                self.diags.append(Diagnostic("DuplicateDeclaration", f"module {m.name!r} declared twice", m.span))
            names[m.name] = m
            self.infos[m.name] = ModuleInfo(m)
        for m in self.modules:
            for d in m.decls:
                if isinstance(d, A.TypeDecl):
                    self.guarded(self.declare_type, d)
        for m in self.modules:
            for d in m.decls:
                if isinstance(d, (A.FunctionDecl, A.SynthFunDecl, A.OracleFunDecl)):
                    self.guarded(self.declare_function, d)
        for m in self.modules:
            self.guarded(self.collect_vars, m)
        for m in self.modules:
            self.guarded(self.qualify, m.name, ())
        for m in self.modules:
            self.check_module(m)
        if self.diags:
            raise ElaborationError(self.diags)
        path = self.modules[0].span.file if self.modules else "<input>"
        return Program(self.infos, self.sorts, tuple(self.type_decls), self.enum_members,
                       self.functions, path)

    def declare_type(self, d: A.TypeDecl):
        if d.name in self.sorts:
            fail("DuplicateDeclaration", f"type {d.name!r} declared twice", d.span)
        if d.type is None:
            s = uninterp(d.name)
        elif isinstance(d.type, A.EnumType):
            if len(set(d.type.members)) != len(d.type.members):
                fail("DuplicateDeclaration", f"enum {d.name!r} repeats a member", d.span)
            s = enum(d.name, d.type.members)
            for mem in d.type.members:
                if mem in self.enum_members:
                    fail("DuplicateDeclaration", f"enum member {mem!r} declared twice", d.span)
                self.enum_members[mem] = s
        else:
            s = resolve_type(d.type, self.sorts)
        self.sorts[d.name] = s
        self.type_decls.append(d)

    def declare_function(self, d):
        params = tuple((n, resolve_type(t, self.sorts)) for n, t in d.params)
        ret = resolve_type(d.ret, self.sorts)
        kind = {A.FunctionDecl: "uninterpreted", A.SynthFunDecl: "synth", A.OracleFunDecl: "oracle"}[type(d)]
        if any(s.kind == "Array" for _, s in params) and kind != "uninterpreted":
            fail("TypeMismatch", f"{kind} function {d.name!r} must have a first-order signature", d.span)
        f = Function(d.name, params, ret, kind, d, getattr(d, "binary", ""))
        old = self.functions.get(d.name)
        if old is not None:
            if (old.kind, old.arg_sorts, old.ret) != (f.kind, f.arg_sorts, f.ret):
                fail("DuplicateDeclaration", f"function {d.name!r} declared twice", d.span)
            return
        if d.name in self.enum_members:
            fail("DuplicateDeclaration", f"{d.name!r} is already an enum member", d.span)
        if isinstance(d, A.SynthFunDecl):
            self.check_grammar(d, params, ret)
        self.functions[d.name] = f

    def check_grammar(self, d: A.SynthFunDecl, params, ret):
        if not d.grammar:
            return
        nts = {nt.name: resolve_type(nt.type, self.sorts) for nt in d.grammar}
        if nts[d.grammar[0].name] != ret:
            _mismatch(f"first nonterminal of {d.name!r} must have the return sort {ret}", d.grammar[0].span)
        scope = ChainMap({n: Entry("param", s, d.span) for n, s in params},
                         {n: Entry("nonterminal", s, d.span) for n, s in nts.items()})
        for nt in d.grammar:
            for p in nt.productions:
                self.expect_sort(p, Ctx(scope), nts[nt.name], f"production of {nt.name}")

    def collect_vars(self, m: A.Module):
        info = self.infos[m.name]
        for d in m.decls:
            if isinstance(d, A.VarDecl):
                s = resolve_type(d.type, self.sorts)
                for n in d.names:
                    if n in info.vars or n in self.enum_members or n in self.functions:
                        fail("DuplicateDeclaration", f"{n!r} declared twice", d.span)
                    info.vars[n] = Entry(d.kind, s, d.span)
            elif isinstance(d, A.InstanceDecl):
                if d.name in info.instances:
                    fail("DuplicateDeclaration", f"instance {d.name!r} declared twice", d.span)
                if d.module not in self.infos:
                    fail("UnknownIdentifier", f"unknown module {d.module!r}", d.span)
                info.instances[d.name] = d
            elif isinstance(d, A.ProcedureDecl):
                if d.name in info.procedures:
                    fail("DuplicateDeclaration", f"procedure {d.name!r} declared twice", d.span)
                info.procedures[d.name] = d

    def qualify(self, name: str, stack: tuple) -> dict[str, Entry]:
        """Own variables plus ``inst.var`` names of all (transitive) instances."""
        if name in stack:
            cycle = " -> ".join(stack + (name,))
            fail("CyclicInstantiation", f"cyclic instantiation {cycle}", self.infos[name].module.span)
        info = self.infos[name]
        if info.qualified:
            return info.qualified
        out = dict(info.vars)
        for inst, d in info.instances.items():
            for n, e in self.qualify(d.module, stack + (name,)).items():
                out[f"{inst}.{n}"] = e
        info.qualified = out
        return out

    # -- module checking ---------------------------------------------------

    def base_scope(self, info: ModuleInfo) -> ChainMap:
        enums = {n: Entry("enum", s, Span("<builtin>", 1, 1)) for n, s in self.enum_members.items()}
        return ChainMap(dict(info.qualified or info.vars), enums)

    def check_module(self, m: A.Module):
        info = self.infos[m.name]
        self.info = info
        scope = self.base_scope(info)
        spec_names: set[str] = set()
        for d in m.decls:
            if isinstance(d, (A.Invariant, A.HyperInvariant, A.Axiom, A.HyperAxiom)):
                if d.name in spec_names:
                    self.diags.append(Diagnostic("DuplicateDeclaration", f"specification {d.name!r} declared twice", d.span))
                spec_names.add(d.name)
            self.guarded(self.check_decl, d, scope)
        if m.control is not None:
            for c in m.control.commands:
                self.guarded(self.check_command, c, info)

    def check_decl(self, d, scope):
        info = self.info
        base = Ctx(scope)
        if isinstance(d, A.DefineDecl):
            if d.name in info.defines or d.name in self.functions:
                fail("DuplicateDeclaration", f"function {d.name!r} declared twice", d.span)
            params = tuple((n, resolve_type(t, self.sorts)) for n, t in d.params)
            ret = resolve_type(d.ret, self.sorts)
            ctx = base.child()
            for n, s in params:
                ctx.names[n] = Entry("param", s, d.span)
            self.expect_sort(d.body, ctx, ret, f"body of {d.name}")
            info.defines[d.name] = Define(d.name, params, ret, d.body, d)
        elif isinstance(d, A.GroupDecl):
            if d.name in info.groups:
                fail("DuplicateDeclaration", f"group {d.name!r} declared twice", d.span)
            s = resolve_type(d.type, self.sorts)
            for e in d.elems:
                ok = isinstance(e, (A.BoolLit, A.IntLit, A.RealLit, A.BVLit)) or (
                    isinstance(e, A.Unary) and e.op == "-" and isinstance(e.arg, (A.IntLit, A.RealLit)))
                if isinstance(e, A.Ident):
                    entry = scope.get(e.name)
                    ok = entry is not None and entry.kind in ("enum", "const")
                if not ok:
                    fail("TypeMismatch", "group elements must be literals, enum members or constants", e.span)
                self.expect_sort(e, base, s, f"element of group {d.name}")
            info.groups[d.name] = Group(d.name, s, d.elems, d)
        elif isinstance(d, A.ProcedureDecl):
            self.check_procedure(d, scope)
        elif isinstance(d, A.InitBlock):
            self.check_block(d.body, base.child(), "init", None)
        elif isinstance(d, A.NextBlock):
            self.check_block(d.body, base.child(), "next", None)
            self.check_primed_once(d.body)
        elif isinstance(d, A.InstanceDecl):
            self.check_instance(d, base)
        elif isinstance(d, A.Invariant):
            self.expect_sort(d.expr, base, BOOL, f"invariant {d.name}")
        elif isinstance(d, A.Axiom):
            self.expect_sort(d.expr, base.child(quantifiers=True), BOOL, f"axiom {d.name}")
        elif isinstance(d, A.HyperInvariant):
            self.expect_sort(d.expr, base.child(hyper=d.arity), BOOL, f"hyperinvariant {d.name}")
        elif isinstance(d, A.HyperAxiom):
            self.expect_sort(d.expr, base.child(hyper=d.arity, quantifiers=True), BOOL, f"hyperaxiom {d.name}")

    def check_instance(self, d: A.InstanceDecl, ctx: Ctx):
        child = self.infos[d.module]
        seen = set()
        for port, e in d.bindings:
            entry = child.vars.get(port)
            if entry is None or entry.kind not in ("input", "output"):
                fail("UnknownIdentifier", f"module {d.module!r} has no port {port!r}", e.span)
            if port in seen:
                fail("DuplicateDeclaration", f"port {port!r} bound twice", e.span)
            seen.add(port)
            self.expect_sort(e, ctx, entry.sort, f"binding of port {port}")
            if entry.kind == "output":
                target = ctx.names.get(e.name) if isinstance(e, A.Ident) else None
                if target is None or target.kind not in ("var", "output") or "." in e.name:
                    fail("IllegalAssignment", f"output port {port!r} must be bound to a variable", e.span)

    def check_command(self, c: A.Command, info: ModuleInfo):
        if c.name == "verify":
            if c.args[0] not in info.procedures:
                fail("UnknownIdentifier", f"unknown procedure {c.args[0]!r}", c.span)
        elif c.name == "print_cex":
            for a in c.args:
                if a not in info.qualified:
                    fail("UnknownIdentifier", f"unknown variable {a!r}", c.span)

    # -- procedures and statements -----------------------------------------

    def check_procedure(self, d: A.ProcedureDecl, scope):
        info = self.info
        ctx = Ctx(scope).child()
        for kind, params in (("param", d.params), ("return", d.returns)):
            for n, t in params:
                if n in ctx.names:
                    fail("DuplicateDeclaration", f"{n!r} shadows an existing name", d.span)
                ctx.names[n] = Entry(kind, resolve_type(t, self.sorts), d.span)
        for n in d.modifies:
            entry = info.vars.get(n)
            if entry is None:
                fail("UnknownIdentifier", f"modifies names unknown variable {n!r}", d.span)
            if entry.kind not in ("var", "output"):
                fail("IllegalAssignment", f"{entry.kind} {n!r} cannot be modified", d.span)
        for e in d.requires:
            self.expect_sort(e, ctx, BOOL, "requires clause")
        olds = frozenset(d.modifies) | {n for n, _ in d.params}
        for e in d.ensures:
            self.expect_sort(e, ctx.child(old=olds), BOOL, "ensures clause")
        if d.body is not None:
            self.check_block(d.body, ctx.child(), "proc", d)

    def check_block(self, body, ctx: Ctx, mode: str, proc):
        for s in body:
            self.check_stmt(s, ctx, mode, proc)

    def assignable(self, name: str, ctx: Ctx, mode: str, proc, primed: bool, span) -> Entry:
        entry = ctx.names.get(name)
        if entry is None:
            fail("UnknownIdentifier", f"unknown identifier {name!r}", span)
        kind = entry.kind
        if primed and (mode != "next" or kind not in ("var", "output", "const")):
            fail("IllegalAssignment", f"primed assignment to {name!r} is only allowed in next blocks", span)
        if kind in STATE_KINDS and name not in self.info.vars:
            fail("IllegalAssignment", f"instance variable {name!r} can only be changed by its own module", span)
        if kind == "input":
            fail("IllegalAssignment", f"input {name!r} cannot be assigned", span)
        if kind == "const" and mode != "init":
            fail("IllegalAssignment", f"constant {name!r} can only be assigned in init", span)
        if kind in ("param", "loopvar", "enum", "bound"):
            fail("IllegalAssignment", f"{name!r} is immutable", span)
        if mode == "proc" and kind in STATE_KINDS and name not in proc.modifies:
            fail("IllegalAssignment", f"procedure {proc.name!r} assigns {name!r} outside its modifies set", span)
        return entry

    def check_stmt(self, s, ctx: Ctx, mode: str, proc):
        if isinstance(s, A.Assign):
            entry = self.assignable(s.target, ctx, mode, proc, s.primed, s.span)
            self.expect_sort(s.value, ctx, entry.sort, f"assignment to {s.target}")
        elif isinstance(s, A.Havoc):
            self.assignable(s.name, ctx, mode, proc, False, s.span)
        elif isinstance(s, A.LocalVar):
            if s.name in ctx.names:
                fail("DuplicateDeclaration", f"local {s.name!r} shadows an existing name", s.span)
            ctx.names[s.name] = Entry("local", resolve_type(s.type, self.sorts), s.span)
        elif isinstance(s, (A.Assert, A.Assume)):
            self.expect_sort(s.expr, ctx, BOOL, type(s).__name__.lower())
        elif isinstance(s, A.If):
            self.expect_sort(s.cond, ctx, BOOL, "if condition")
            self.check_block(s.then, ctx.child(), mode, proc)
            self.check_block(s.else_, ctx.child(), mode, proc)
        elif isinstance(s, A.Case):
            for g, b in s.arms:
                self.expect_sort(g, ctx, BOOL, "case guard")
                self.check_block(b, ctx.child(), mode, proc)
        elif isinstance(s, A.For):
            self.expect_sort(s.lo, ctx, INT, "for-loop bound")
            self.expect_sort(s.hi, ctx, INT, "for-loop bound")
            if s.var in ctx.names:
                fail("DuplicateDeclaration", f"loop variable {s.var!r} shadows an existing name", s.span)
            inner = ctx.child()
            inner.names[s.var] = Entry("loopvar", INT, s.span)
            self.check_block(s.body, inner, mode, proc)
        elif isinstance(s, A.While):
            self.expect_sort(s.cond, ctx, BOOL, "while condition")
            for _, inv in s.invariants:
                self.expect_sort(inv, ctx, BOOL, "loop invariant")
            for inner in s.body:
                if isinstance(inner, A.Assign) and inner.primed:
                    fail("IllegalAssignment", "primed assignments are not allowed inside loops", inner.span)
            self.check_block(s.body, ctx.child(), mode, proc)
        elif isinstance(s, A.Call):
            self.check_call(s, ctx, mode, proc)
        elif isinstance(s, A.NextInst):
            if mode != "next":
                fail("IllegalAssignment", "next(instance) is only allowed in next blocks", s.span)
            if s.instance not in self.info.instances:
                fail("UnknownIdentifier", f"unknown instance {s.instance!r}", s.span)
        else:
            raise TypeError(f"unexpected statement {type(s).__name__}")

    def check_call(self, s: A.Call, ctx: Ctx, mode: str, proc):
        callee = self.info.procedures.get(s.proc)
        if callee is None:
            fail("UnknownIdentifier", f"unknown procedure {s.proc!r}", s.span)
        if len(s.args) != len(callee.params):
            _mismatch(f"{s.proc} expects {len(callee.params)} arguments, got {len(s.args)}", s.span)
        for a, (_, t) in zip(s.args, callee.params):
            self.expect_sort(a, ctx, resolve_type(t, self.sorts), f"argument of {s.proc}")
        if len(s.lhs) != len(callee.returns):
            _mismatch(f"{s.proc} returns {len(callee.returns)} values, {len(s.lhs)} targets given", s.span)
        for n, (_, t) in zip(s.lhs, callee.returns):
            entry = self.assignable(n, ctx, mode, proc, False, s.span)
            want = resolve_type(t, self.sorts)
            if entry.sort != want:
                _mismatch(f"cannot assign {want} result of {s.proc} to {n} : {entry.sort}", s.span)
        for n in callee.modifies:
            entry = self.info.vars[n]
            if mode == "proc" and n not in proc.modifies:
                fail("IllegalAssignment", f"call to {s.proc} modifies {n!r} outside the caller's modifies set", s.span)
            if entry.kind == "const" and mode != "init":
                fail("IllegalAssignment", f"call to {s.proc} modifies constant {n!r}", s.span)

    def check_primed_once(self, body):
        def go(stmts) -> set[str]:
            seen: set[str] = set()
            for s in stmts:
                if isinstance(s, A.Assign) and s.primed:
                    here = {s.target}
                elif isinstance(s, A.If):
                    here = go(s.then) | go(s.else_)
                elif isinstance(s, A.Case):
                    here = set().union(*(go(b) for _, b in s.arms)) if s.arms else set()
                elif isinstance(s, A.For):
                    inner = go(s.body)
                    if inner:
                        fail("IllegalAssignment", "primed assignments are not allowed inside loops", s.span)
                    here = set()
                else:
                    here = set()
                dup = seen & here
                if dup:
                    fail("IllegalAssignment", f"{sorted(dup)[0]}' assigned more than once in next block", s.span)
                seen |= here
            return seen

        go(body)

    # -- expressions -------------------------------------------------------

    def expect_sort(self, e: A.Expr, ctx: Ctx, want: Sort, what: str):
        got = self.infer(e, ctx)
        if got != want:
            _mismatch(f"{what}: expected {want}, got {got}", e.span)

    def infer(self, e: A.Expr, ctx: Ctx) -> Sort:
        if isinstance(e, A.BoolLit):
            return BOOL
        if isinstance(e, A.IntLit):
            return INT
        if isinstance(e, A.RealLit):
            return REAL
        if isinstance(e, A.BVLit):
            return bv(e.width)
        if isinstance(e, A.Ident):
            entry = ctx.names.get(e.name)
            if entry is None:
                fail("UnknownIdentifier", f"unknown identifier {e.name!r}", e.span)
            if ctx.hyper and entry.kind in STATE_KINDS:
                fail("TypeMismatch", f"state variable {e.name!r} must be trace-indexed in a hyper specification", e.span)
            if entry.kind == "nonterminal" or entry.kind in ("param", "return", "local", "loopvar", "bound", "enum") \
                    or entry.kind in STATE_KINDS:
                return entry.sort
            fail("UnknownIdentifier", f"{e.name!r} is not a value", e.span)
        if isinstance(e, A.TraceIdent):
            if not ctx.hyper:
                fail("TypeMismatch", f"trace-indexed {e.name}.{e.index} outside a hyper specification", e.span)
            entry = ctx.names.get(e.name)
            if entry is None or entry.kind not in STATE_KINDS:
                fail("UnknownIdentifier", f"unknown state variable {e.name!r}", e.span)
            if not 1 <= e.index <= ctx.hyper:
                fail("IndexOutOfArity", f"trace index {e.index} exceeds declared arity {ctx.hyper}", e.span)
            return entry.sort
        if isinstance(e, A.Primed):
            fail("IllegalExpression", f"primed variable {e.name}' may only appear as an assignment target", e.span)
        if isinstance(e, A.Old):
            if ctx.old is None:
                fail("IllegalExpression", "old() is only allowed in ensures clauses", e.span)
            if e.name not in ctx.old:
                fail("IllegalExpression", f"old({e.name}) must name a modified variable or parameter", e.span)
            return ctx.names[e.name].sort
        if isinstance(e, A.Unary):
            s = self.infer(e.arg, ctx)
            if e.op == "!" and s == BOOL:
                return s
            if e.op == "-" and s.kind in ("Int", "Real", "BitVec"):
                return s
            if e.op == "~" and s.kind == "BitVec":
                return s
            _mismatch(f"operator {e.op} does not apply to {s}", e.span)
        if isinstance(e, A.Binary):
            return self.infer_binary(e, ctx)
        if isinstance(e, A.Ite):
            self.expect_sort(e.cond, ctx, BOOL, "if-then-else condition")
            t = self.infer(e.then, ctx)
            self.expect_sort(e.else_, ctx, t, "else branch")
            return t
        if isinstance(e, A.Apply):
            return self.infer_apply(e, ctx)
        if isinstance(e, A.Select):
            a = self.infer(e.array, ctx)
            if a.kind != "Array":
                _mismatch(f"cannot index a value of sort {a}", e.span)
            self.expect_sort(e.index, ctx, a.index, "array index")
            return a.elem
        if isinstance(e, A.Store):
            a = self.infer(e.array, ctx)
            if a.kind != "Array":
                _mismatch(f"cannot update a value of sort {a}", e.span)
            self.expect_sort(e.index, ctx, a.index, "array index")
            self.expect_sort(e.value, ctx, a.elem, "array element")
            return a
        if isinstance(e, A.Extract):
            s = self.infer(e.arg, ctx)
            if s.kind != "BitVec" or e.hi >= s.width:
                _mismatch(f"bad extract [{e.hi}:{e.lo}] of {s}", e.span)
            return bv(e.hi - e.lo + 1)
        if isinstance(e, A.FiniteQuant):
            g = self.info.groups.get(e.group) if self.info else None
            if g is None:
                fail("UnknownGroup", f"unknown group {e.group!r}", e.span)
            s = resolve_type(e.type, self.sorts)
            if s != g.sort:
                _mismatch(f"group {e.group} has elements of sort {g.sort}, not {s}", e.span)
            inner = ctx.child()
            inner.names[e.var] = Entry("bound", s, e.span)
            self.expect_sort(e.body, inner, BOOL, "quantifier body")
            return BOOL
        if isinstance(e, A.Quant):
            if not ctx.quantifiers:
                fail("IllegalExpression", f"{e.kind} is only allowed in axioms", e.span)
            inner = ctx.child()
            for n, t in e.bindings:
                inner.names[n] = Entry("bound", resolve_type(t, self.sorts), e.span)
            self.expect_sort(e.body, inner, BOOL, "quantifier body")
            return BOOL
        raise TypeError(f"unexpected expression {type(e).__name__}")

    def infer_apply(self, e: A.Apply, ctx: Ctx) -> Sort:
        info = self.info
        if info is not None and e.func in info.defines:
            d = info.defines[e.func]
            params, ret = d.params, d.ret
        elif e.func in self.functions:
            f = self.functions[e.func]
            params, ret = f.params, f.ret
        elif info is not None and e.func in info.procedures:
            fail("IllegalExpression", f"procedure {e.func!r} must be invoked with call", e.span)
        else:
            fail("UnknownIdentifier", f"unknown function {e.func!r}", e.span)
        if len(e.args) != len(params):
            _mismatch(f"{e.func} expects {len(params)} arguments, got {len(e.args)}", e.span)
        for a, (_, s) in zip(e.args, params):
            self.expect_sort(a, ctx, s, f"argument of {e.func}")
        return ret

    def infer_binary(self, e: A.Binary, ctx: Ctx) -> Sort:
        op = e.op
        if op in ("==>", "<==>", "&&", "||"):
            self.expect_sort(e.lhs, ctx, BOOL, f"operand of {op}")
            self.expect_sort(e.rhs, ctx, BOOL, f"operand of {op}")
            return BOOL
        lhs = self.infer(e.lhs, ctx)
        rhs = self.infer(e.rhs, ctx)
        if op == "++":
            if lhs.kind != "BitVec" or rhs.kind != "BitVec":
                _mismatch("++ concatenates bitvectors", e.span)
            return bv(lhs.width + rhs.width)
        if lhs != rhs:
            _mismatch(f"operands of {op} differ: {lhs} vs {rhs}", e.span)
        s = lhs
        if op in ("==", "!="):
            return BOOL
        if op in ("<", "<=", ">", ">="):
            if s.kind in ("Int", "Real", "BitVec"):
                return BOOL
        elif op in ("+", "-", "*"):
            if s.kind in ("Int", "Real", "BitVec"):
                return s
        elif op == "/":
            if s.kind in ("Real", "BitVec"):
                return s
            if s == INT:
                _mismatch("integer division is written div", e.span)
        elif op in ("div", "mod"):
            if s.kind in ("Int", "BitVec"):
                return s
        elif op in ("&", "|", "^"):
            if s.kind in ("Bool", "BitVec"):
                return s
        _mismatch(f"operator {op} does not apply to {s}", e.span)


def typecheck(modules: list[A.Module]) -> Program:
    """Resolve names and check types; raises ElaborationError with all diagnostics."""
    return Checker(list(modules)).run()
