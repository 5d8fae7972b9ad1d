"""Translation of surface expressions into solver terms."""

from __future__ import annotations

from typing import Mapping

from ..diagnostics import fail
from ..elaboration import TypedModule
from ..elaboration.passes import ground_expr
from ..frontend import ast as A
from ..terms import FALSE, TRUE, Term, apply, bound, bv_lit, int_lit, ite, lit, mk, not_, quant, real_lit

_BOOL_BIN = {"==>": "=>", "<==>": "=", "&&": "and", "||": "or"}
_NUM = {"<": "<", "<=": "<=", ">": ">", ">=": ">=", "+": "+", "-": "-", "*": "*", "/": "/",
        "div": "div", "mod": "mod"}
_BV = {"<": "bvult", "<=": "bvule", ">": "bvugt", ">=": "bvuge", "+": "bvadd", "-": "bvsub",
       "*": "bvmul", "/": "bvudiv", "div": "bvudiv", "mod": "bvurem", "&": "bvand", "|": "bvor",
       "^": "bvxor"}
_LOGIC = {"&": "and", "|": "or", "^": "xor"}


class Translator:
    """Turns expressions into terms under an environment of variable terms.

    Defines are expanded as macros; uninterpreted, synthesis and oracle
    functions become applications.
    """

    def __init__(self, m: TypedModule):
        self.m = m

    def expr(self, e: A.Expr, env: Mapping[str, Term], old: Mapping[str, Term] | None = None,
             scope: Mapping[str, Term] | None = None) -> Term:
        scope = scope or {}
        tr = lambda x: self.expr(x, env, old, scope)  # noqa: E731
        if isinstance(e, A.BoolLit):
            return TRUE if e.value else FALSE
        if isinstance(e, A.IntLit):
            return int_lit(e.value)
        if isinstance(e, A.RealLit):
            return real_lit(e.value)
        if isinstance(e, A.BVLit):
            return bv_lit(e.value, e.width)
        if isinstance(e, A.Ident):
            if e.name in scope:
                return scope[e.name]
            if e.name in env:
                return env[e.name]
            if e.name in self.m.enum_members:
                return lit(e.name, self.m.enum_members[e.name])
            fail("UnknownIdentifier", f"no value for {e.name!r}", e.span)
        if isinstance(e, A.TraceIdent):
            name = f"{e.name}.{e.index}"
            if name in env:
                return env[name]
            fail("UnknownIdentifier", f"trace-indexed {name!r} used outside a composed module", e.span)
        if isinstance(e, A.Old):
            if old is None or e.name not in old:
                fail("IllegalExpression", f"old({e.name}) has no pre-state here", e.span)
            return old[e.name]
        if isinstance(e, A.Unary):
            a = tr(e.arg)
            if e.op == "!":
                return not_(a)
            if e.op == "~":
                return mk("bvnot", a)
            return mk("bvneg", a) if a.sort.kind == "BitVec" else mk("-", a)
        if isinstance(e, A.Binary):
            return self.binary(e.op, tr(e.lhs), tr(e.rhs))
        if isinstance(e, A.Ite):
            return ite(tr(e.cond), tr(e.then), tr(e.else_))
        if isinstance(e, A.Apply):
            args = [tr(a) for a in e.args]
            d = self.m.defines.get(e.func)
            if d is not None:
                inner = {n: a for (n, _), a in zip(d.params, args)}
                return self.expr(d.body, env, None, inner)
            f = self.m.functions.get(e.func)
            if f is None:
                fail("UnknownIdentifier", f"unknown function {e.func!r}", e.span)
            return apply(f.name, args, f.ret)
        if isinstance(e, A.Select):
            return mk("select", tr(e.array), tr(e.index))
        if isinstance(e, A.Store):
            return mk("store", tr(e.array), tr(e.index), tr(e.value))
        if isinstance(e, A.Extract):
            return mk("extract", tr(e.arg), value=(e.hi, e.lo))
        if isinstance(e, A.Quant):
            binders = tuple((n, self.m.resolve(t)) for n, t in e.bindings)
            inner = dict(scope)
            inner.update({n: bound(n, s) for n, s in binders})
            return quant(e.kind, binders, self.expr(e.body, env, old, inner))
        if isinstance(e, A.FiniteQuant):
            return tr(ground_expr(e, self.m.groups))
        if isinstance(e, A.Primed):
            fail("IllegalExpression", f"{e.name}' outside an assignment target", e.span)
        raise TypeError(f"cannot translate {type(e).__name__}")

    @staticmethod
    def binary(op: str, a: Term, b: Term) -> Term:
        if op in _BOOL_BIN:
            return mk(_BOOL_BIN[op], a, b)
        if op == "==":
            return mk("=", a, b)
        if op == "!=":
            return mk("distinct", a, b)
        if op == "++":
            return mk("concat", a, b)
        kind = a.sort.kind
        if kind == "BitVec":
            return mk(_BV[op], a, b)
        if kind == "Bool":
            return mk(_LOGIC[op], a, b)
        return mk(_NUM[op], a, b)

