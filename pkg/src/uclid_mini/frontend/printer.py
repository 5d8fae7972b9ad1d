"""Canonical pretty-printer: one statement per line, two-space indent."""

from __future__ import annotations

import re
from fractions import Fraction

from . import ast as A

_LEVEL = {"==>": 1, "<==>": 2, "||": 3, "&&": 4, "|": 5, "^": 6, "&": 7,
          "==": 8, "!=": 8, "<": 9, "<=": 9, ">": 9, ">=": 9, "++": 10,
          "+": 11, "-": 11, "*": 12, "/": 12, "div": 12, "mod": 12}
_UNARY = 13
_POSTFIX = 14
_ATOM = 15
_RAW_PATH = re.compile(r"^[A-Za-z0-9_.\-/]+$")


def decimal(value: Fraction) -> str:
    """Exact decimal text for a terminating fraction."""
    sign = "-" if value < 0 else ""
    value = abs(value)
    whole, rest = divmod(value.numerator, value.denominator)
    if rest == 0:
        return f"{sign}{whole}.0"
    digits = []
    frac = Fraction(rest, value.denominator)
    for _ in range(64):
        frac *= 10
        d = frac.numerator // frac.denominator
        digits.append(str(d))
        frac -= d
        if frac == 0:
            break
    else:
        raise ValueError(f"{value} has no finite decimal expansion")
    return f"{sign}{whole}." + "".join(digits)


def _level(e: A.Expr) -> int:
    if isinstance(e, A.Binary):
        return _LEVEL[e.op]
    if isinstance(e, A.Unary):
        return _UNARY
    if isinstance(e, (A.Select, A.Store, A.Extract)):
        return _POSTFIX
    if isinstance(e, (A.Ite, A.FiniteQuant, A.Quant)):
        return 0
    if isinstance(e, A.IntLit) and e.value < 0:
        return _UNARY
    return _ATOM


def expr(e: A.Expr, min_level: int = 0) -> str:
    text = _expr(e)
    return f"({text})" if _level(e) < min_level else text


def _expr(e: A.Expr) -> str:
    if isinstance(e, A.BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, A.IntLit):
        return str(e.value)
    if isinstance(e, A.RealLit):
        return decimal(e.value)
    if isinstance(e, A.BVLit):
        return f"{e.value}bv{e.width}"
    if isinstance(e, A.Ident):
        return e.name
    if isinstance(e, A.Primed):
        return f"{e.name}'"
    if isinstance(e, A.TraceIdent):
        return f"{e.name}.{e.index}"
    if isinstance(e, A.Old):
        return f"old({e.name})"
    if isinstance(e, A.Unary):
        return e.op + expr(e.arg, _UNARY)
    if isinstance(e, A.Binary):
        lvl = _LEVEL[e.op]
        if e.op == "==>":
            return f"{expr(e.lhs, lvl + 1)} ==> {expr(e.rhs, lvl)}"
        return f"{expr(e.lhs, lvl)} {e.op} {expr(e.rhs, lvl + 1)}"
    if isinstance(e, A.Ite):
        return f"if {expr(e.cond)} then {expr(e.then)} else {expr(e.else_)}"
    if isinstance(e, A.Apply):
        return f"{e.func}({', '.join(expr(a) for a in e.args)})"
    if isinstance(e, A.Select):
        return f"{expr(e.array, _POSTFIX)}[{expr(e.index)}]"
    if isinstance(e, A.Store):
        return f"{expr(e.array, _POSTFIX)}[{expr(e.index)} -> {expr(e.value)}]"
    if isinstance(e, A.Extract):
        return f"{expr(e.arg, _POSTFIX)}[{e.hi}:{e.lo}]"
    if isinstance(e, A.FiniteQuant):
        return f"{e.kind} ({e.var} : {type_(e.type)}) in {e.group} :: {expr(e.body)}"
    if isinstance(e, A.Quant):
        binds = ", ".join(f"{n} : {type_(t)}" for n, t in e.bindings)
        return f"{e.kind} ({binds}) :: {expr(e.body)}"
    raise TypeError(f"cannot print {type(e).__name__}")


def type_(t: A.Type) -> str:
    if isinstance(t, A.TypeName):
        return t.name
    if isinstance(t, A.BVType):
        return f"bv{t.width}"
    if isinstance(t, A.ArrayType):
        return f"[{type_(t.index)}]{type_(t.elem)}"
    if isinstance(t, A.EnumType):
        return "enum { " + ", ".join(t.members) + " }"
    raise TypeError(f"cannot print type {type(t).__name__}")


def _params(ps: A.Params) -> str:
    return ", ".join(f"{n} : {type_(t)}" for n, t in ps)


class _Writer:
    def __init__(self):
        self.lines: list[str] = []
        self.depth = 0

    def line(self, text: str):
        self.lines.append("  " * self.depth + text)

    def block(self, stmts):
        self.depth += 1
        for s in stmts:
            self.stmt(s)
        self.depth -= 1

    def stmt(self, s: A.Stmt):
        if isinstance(s, A.Assign):
            self.line(f"{s.target}{chr(39) if s.primed else ''} = {expr(s.value)};")
        elif isinstance(s, A.Havoc):
            self.line(f"havoc {s.name};")
        elif isinstance(s, A.Assert):
            label = f"{s.label}: " if s.label else ""
            self.line(f"assert {label}{expr(s.expr)};")
        elif isinstance(s, A.Assume):
            self.line(f"assume {expr(s.expr)};")
        elif isinstance(s, A.If):
            self._if(s, "")
        elif isinstance(s, A.Case):
            self.line("case")
            self.depth += 1
            for guard, body in s.arms:
                self.line(f"{expr(guard)} : {{")
                self.block(body)
                self.line("}")
            self.depth -= 1
            self.line("esac")
        elif isinstance(s, A.For):
            self.line(f"for {s.var} in {expr(s.lo, _UNARY)}..{expr(s.hi, _UNARY)} {{")
            self.block(s.body)
            self.line("}")
        elif isinstance(s, A.While):
            self.line(f"while ({expr(s.cond)})")
            self.depth += 1
            for label, inv in s.invariants:
                self.line(f"invariant {label + ': ' if label else ''}{expr(inv)};")
            self.depth -= 1
            self.line("{")
            self.block(s.body)
            self.line("}")
        elif isinstance(s, A.Call):
            args = ", ".join(expr(a) for a in s.args)
            lhs = f"({', '.join(s.lhs)}) = " if s.lhs else ""
            self.line(f"call {lhs}{s.proc}({args});")
        elif isinstance(s, A.NextInst):
            self.line(f"next({s.instance});")
        elif isinstance(s, A.LocalVar):
            self.line(f"var {s.name} : {type_(s.type)};")
        else:
            raise TypeError(f"cannot print statement {type(s).__name__}")

    def _if(self, s: A.If, prefix: str):
        self.line(f"{prefix}if ({expr(s.cond)}) {{")
        self.block(s.then)
        if len(s.else_) == 1 and isinstance(s.else_[0], A.If):
            self._if(s.else_[0], "} else ")
            return
        if s.else_:
            self.line("} else {")
            self.block(s.else_)
        self.line("}")

    def decl(self, d: A.Decl):
        if isinstance(d, A.TypeDecl):
            self.line(f"type {d.name};" if d.type is None else f"type {d.name} = {type_(d.type)};")
        elif isinstance(d, A.VarDecl):
            self.line(f"{d.kind} {', '.join(d.names)} : {type_(d.type)};")
        elif isinstance(d, A.FunctionDecl):
            self.line(f"function {d.name}({_params(d.params)}) : {type_(d.ret)};")
        elif isinstance(d, A.DefineDecl):
            self.line(f"define {d.name}({_params(d.params)}) : {type_(d.ret)} = {expr(d.body)};")
        elif isinstance(d, A.SynthFunDecl):
            head = f"synthesis function {d.name}({_params(d.params)}) : {type_(d.ret)}"
            if not d.grammar:
                self.line(head + ";")
                return
            self.line(head)
            self.depth += 1
            self.line("grammar {")
            self.depth += 1
            for nt in d.grammar:
                prods = ", ".join(expr(p) for p in nt.productions)
                self.line(f"{nt.name} : {type_(nt.type)} = {{ {prods} }};")
            self.depth -= 1
            self.line("};")
            self.depth -= 1
        elif isinstance(d, A.OracleFunDecl):
            path = d.binary
            if not _RAW_PATH.match(path) or "//" in path or "/*" in path:
                path = f'"{path}"'
            self.line(f"oracle function [{path}] {d.name}({_params(d.params)}) : {type_(d.ret)};")
        elif isinstance(d, A.ProcedureDecl):
            head = f"procedure {d.name}({_params(d.params)})"
            if d.returns:
                head += f" returns ({_params(d.returns)})"
            specs = [f"requires {expr(e)};" for e in d.requires]
            specs += [f"ensures {expr(e)};" for e in d.ensures]
            if d.modifies:
                specs.append(f"modifies {', '.join(d.modifies)};")
            if d.body is None and not specs:
                self.line(head + ";")
                return
            self.line(head)
            self.depth += 1
            for s in specs:
                self.line(s)
            self.depth -= 1
            if d.body is None:
                self.line(";")
            else:
                self.line("{")
                self.block(d.body)
                self.line("}")
        elif isinstance(d, (A.InitBlock, A.NextBlock)):
            self.line(("init" if isinstance(d, A.InitBlock) else "next") + " {")
            self.block(d.body)
            self.line("}")
        elif isinstance(d, A.InstanceDecl):
            binds = ", ".join(f"{p} : {expr(e)}" for p, e in d.bindings)
            self.line(f"instance {d.name} : {d.module}({binds});")
        elif isinstance(d, A.Invariant):
            self.line(f"invariant {d.name} : {expr(d.expr)};")
        elif isinstance(d, A.HyperInvariant):
            self.line(f"hyperinvariant[{d.arity}] {d.name} : {expr(d.expr)};")
        elif isinstance(d, A.Axiom):
            self.line(f"axiom {d.name} : {expr(d.expr)};")
        elif isinstance(d, A.HyperAxiom):
            self.line(f"hyperaxiom[{d.arity}] {d.name} : {expr(d.expr)};")
        elif isinstance(d, A.GroupDecl):
            elems = ", ".join(expr(e) for e in d.elems)
            self.line(f"group {d.name} : {type_(d.type)} = {{ {elems} }};" if elems
                      else f"group {d.name} : {type_(d.type)} = {{ }};")
        else:
            raise TypeError(f"cannot print declaration {type(d).__name__}")

    def control(self, c: A.ControlBlock):
        self.line("control {")
        self.depth += 1
        for cmd in c.commands:
            args = list(cmd.args)
            suffix = ""
            if cmd.name == "check_sat" and args and args[-1] in ("observable", "unobservable"):
                suffix = f" expect {args.pop()}"
            text = cmd.name
            if args or cmd.name == "print_cex" and cmd.args:
                text += "(" + ", ".join(str(a) for a in args) + ")"
            self.line(text + suffix + ";")
        self.depth -= 1
        self.line("}")


def pretty_print(module: A.Module) -> str:
    w = _Writer()
    w.line(f"module {module.name} {{")
    w.depth += 1
    for d in module.decls:
        w.decl(d)
    if module.control is not None:
        w.control(module.control)
    w.depth -= 1
    w.line("}")
    return "\n".join(w.lines) + "\n"


def pretty_print_all(modules) -> str:
    return "\n".join(pretty_print(m) for m in modules)
