"""Solver-level terms.

A :class:`Term` is an immutable, well-sorted expression tree whose operator
names are the SMT-LIB ones, so printing is a direct walk.  Terms are built
through :func:`mk` (and a few literal/symbol helpers), which infers and
checks sorts.  No simplification happens here: ``0 + 1`` stays ``0 + 1``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .values import ArrayValue


class SortError(Exception):
    pass


@dataclass(frozen=True)
class Sort:
    kind: str  # Bool | Int | Real | BitVec | Array | Uninterp | Enum
    width: int = 0
    index: "Sort | None" = None
    elem: "Sort | None" = None
    name: str = ""
    members: tuple = ()

    def __str__(self) -> str:
        return sort_to_smt(self)

    @property
    def is_finite(self) -> bool:
        return self.kind in ("Bool", "Enum") or (self.kind == "BitVec" and self.width <= 8)


BOOL = Sort("Bool")
INT = Sort("Int")
REAL = Sort("Real")


def bv(width: int) -> Sort:
    if width < 1:
        raise SortError(f"bitvector width must be positive, got {width}")
    return Sort("BitVec", width=width)


def array(index: Sort, elem: Sort) -> Sort:
    return Sort("Array", index=index, elem=elem)


def uninterp(name: str) -> Sort:
    return Sort("Uninterp", name=name)


def enum(name: str, members: Iterable[str]) -> Sort:
    return Sort("Enum", name=name, members=tuple(members))


def sort_to_smt(s: Sort) -> str:
    if s.kind in ("Bool", "Int", "Real"):
        return s.kind
    if s.kind == "BitVec":
        return f"(_ BitVec {s.width})"
    if s.kind == "Array":
        return f"(Array {sort_to_smt(s.index)} {sort_to_smt(s.elem)})"
    return smt_symbol(s.name)


# --- symbol escaping -------------------------------------------------------

_SIMPLE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_RESERVED = {
    "true", "false", "not", "and", "or", "xor", "ite", "let", "forall", "exists",
    "match", "par", "as", "distinct", "select", "store", "div", "mod", "abs",
    "to_real", "to_int", "is_int", "concat", "extract", "assert", "declare",
    "define", "_", "!", "NUMERAL", "DECIMAL", "STRING", "BINARY", "HEXADECIMAL",
    "Bool", "Int", "Real", "Array", "BitVec", "set", "get", "push", "pop",
}


def smt_symbol(name: str) -> str:
    """Escape a name into a legal SMT-LIB symbol (reversible)."""
    if "|" in name or "\\" in name:
        raise SortError(f"name {name!r} cannot be escaped")
    if _SIMPLE.match(name) and name not in _RESERVED and not name.startswith("bv"):
        return name
    return f"|{name}|"


def smt_unescape(text: str) -> str:
    if len(text) >= 2 and text[0] == "|" and text[-1] == "|":
        return text[1:-1]
    return text


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class SymConst:
    """A symbolic constant: variable ``var`` at ``step`` in trace ``trace``."""

    var: str
    step: int
    trace: int = 1
    tag: str = ""

    @property
    def name(self) -> str:
        base = f"{self.var}@{self.step}"
        return f"{base}!{self.tag}" if self.tag else base


class Term:
    __slots__ = ("op", "args", "sort", "value", "_hash")

    def __init__(self, op: str, args: tuple, sort: Sort, value=None):
        self.op = op
        self.args = args
        self.sort = sort
        self.value = value
        self._hash = hash((op, args, sort, value))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term) or self._hash != other._hash:
            return False
        return (self.op == other.op and self.value == other.value
                and self.sort == other.sort and self.args == other.args)

    def __repr__(self) -> str:
        return f"Term({to_smt(self)})"

    def __str__(self) -> str:
        return to_smt(self)

    @property
    def is_literal(self) -> bool:
        return self.op == "lit"


def lit(value, sort: Sort) -> Term:
    if sort.kind == "Bool":
        value = bool(value)
    elif sort.kind == "Int":
        value = int(value)
    elif sort.kind == "Real":
        value = Fraction(value)
    elif sort.kind == "BitVec":
        value = int(value) % (1 << sort.width)
    return Term("lit", (), sort, value)


TRUE = lit(True, BOOL)
FALSE = lit(False, BOOL)


def int_lit(n: int) -> Term:
    return lit(n, INT)


def real_lit(v) -> Term:
    return lit(Fraction(v), REAL)


def bv_lit(v: int, width: int) -> Term:
    return lit(v, bv(width))


def sym(var: str, step: int, sort: Sort, trace: int = 1, tag: str = "") -> Term:
    return Term("sym", (), sort, SymConst(var, step, trace, tag))


def bound(name: str, sort: Sort) -> Term:
    return Term("bound", (), sort, name)


def apply(fname: str, args: Iterable[Term], ret: Sort) -> Term:
    return Term("apply", tuple(args), ret, fname)


def quant(kind: str, binders: Iterable[tuple[str, Sort]], body: Term) -> Term:
    if body.sort != BOOL:
        raise SortError("quantifier body must be Bool")
    return Term(kind, (body,), BOOL, tuple(binders))


def const_array(sort: Sort, value: Term) -> Term:
    return Term("const_array", (value,), sort)


_BOOL_OPS = {"not", "and", "or", "=>", "xor"}
_CMP_OPS = {"<", "<=", ">", ">="}
_BV_CMP = {"bvult", "bvule", "bvugt", "bvuge", "bvslt", "bvsle", "bvsgt", "bvsge"}
_BV_ARITH = {"bvadd", "bvsub", "bvmul", "bvudiv", "bvurem", "bvand", "bvor", "bvxor",
             "bvshl", "bvlshr", "bvashr"}
_BV_UNARY = {"bvnot", "bvneg"}


def _same(args, what):
    s = args[0].sort
    for a in args[1:]:
        if a.sort != s:
            raise SortError(f"{what}: sort mismatch {s} vs {a.sort}")
    return s


def mk(op: str, *args: Term, value=None) -> Term:
    """Build an operator application, inferring and checking its sort."""
    if op in _BOOL_OPS:
        for a in args:
            if a.sort != BOOL:
                raise SortError(f"{op} expects Bool arguments, got {a.sort}")
        if op == "not" and len(args) != 1:
            raise SortError("not is unary")
        if op == "and" and not args:
            return TRUE
        if op == "or" and not args:
            return FALSE
        if op in ("and", "or") and len(args) == 1:
            return args[0]
        return Term(op, args, BOOL)
    if op in ("=", "distinct"):
        _same(args, op)
        return Term(op, args, BOOL)
    if op in _CMP_OPS:
        s = _same(args, op)
        if s.kind not in ("Int", "Real"):
            raise SortError(f"{op} expects numeric arguments")
        return Term(op, args, BOOL)
    if op in ("+", "-", "*"):
        s = _same(args, op)
        if s.kind not in ("Int", "Real"):
            raise SortError(f"{op} expects numeric arguments, got {s}")
        return Term(op, args, s)
    if op in ("div", "mod", "abs"):
        s = _same(args, op)
        if s != INT:
            raise SortError(f"{op} expects Int")
        return Term(op, args, INT)
    if op == "/":
        s = _same(args, op)
        if s != REAL:
            raise SortError("/ expects Real")
        return Term(op, args, REAL)
    if op == "to_real":
        if args[0].sort != INT:
            raise SortError("to_real expects Int")
        return Term(op, args, REAL)
    if op in _BV_CMP:
        s = _same(args, op)
        if s.kind != "BitVec":
            raise SortError(f"{op} expects bitvectors")
        return Term(op, args, BOOL)
    if op in _BV_ARITH:
        s = _same(args, op)
        if s.kind != "BitVec":
            raise SortError(f"{op} expects bitvectors")
        return Term(op, args, s)
    if op in _BV_UNARY:
        if args[0].sort.kind != "BitVec":
            raise SortError(f"{op} expects a bitvector")
        return Term(op, args, args[0].sort)
    if op == "concat":
        if any(a.sort.kind != "BitVec" for a in args):
            raise SortError("concat expects bitvectors")
        return Term(op, args, bv(sum(a.sort.width for a in args)))
    if op == "extract":
        hi, lo = value
        w = args[0].sort.width
        if args[0].sort.kind != "BitVec" or not (0 <= lo <= hi < w):
            raise SortError(f"bad extract [{hi}:{lo}] on {args[0].sort}")
        return Term(op, args, bv(hi - lo + 1), (hi, lo))
    if op == "ite":
        c, t, e = args
        if c.sort != BOOL:
            raise SortError("ite condition must be Bool")
        if t.sort != e.sort:
            raise SortError(f"ite branches differ: {t.sort} vs {e.sort}")
        if t == e:
            return t
        return Term(op, args, t.sort)
    if op == "select":
        a, i = args
        if a.sort.kind != "Array" or a.sort.index != i.sort:
            raise SortError(f"bad select on {a.sort} with {i.sort}")
        return Term(op, args, a.sort.elem)
    if op == "store":
        a, i, v = args
        if a.sort.kind != "Array" or a.sort.index != i.sort or a.sort.elem != v.sort:
            raise SortError(f"bad store on {a.sort}")
        return Term(op, args, a.sort)
    raise SortError(f"unknown operator {op}")


def not_(t: Term) -> Term:
    return mk("not", t)


def and_(ts: Iterable[Term]) -> Term:
    return mk("and", *ts)


def or_(ts: Iterable[Term]) -> Term:
    return mk("or", *ts)


def implies(a: Term, b: Term) -> Term:
    return mk("=>", a, b)


def eq(a: Term, b: Term) -> Term:
    return mk("=", a, b)


def ite(c: Term, t: Term, e: Term) -> Term:
    return mk("ite", c, t, e)


def guard(assumptions: list[Term], goal: Term) -> Term:
    """``assumptions => goal`` with the empty conjunction left implicit."""
    if not assumptions:
        return goal
    return implies(and_(assumptions), goal)


# --- traversal -------------------------------------------------------------


def walk(term: Term):
    """Pre-order iteration over distinct subterms."""
    seen = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if t in seen:
            continue
        seen.add(t)
        yield t
        stack.extend(reversed(t.args))


def symbols(terms: Iterable[Term]) -> list[Term]:
    found = {}
    for root in terms:
        for t in walk(root):
            if t.op == "sym":
                found[t.value.name] = t
    return list(found.values())


def function_signatures(terms: Iterable[Term]) -> dict[str, tuple[tuple[Sort, ...], Sort]]:
    sigs: dict[str, tuple[tuple[Sort, ...], Sort]] = {}
    for root in terms:
        for t in walk(root):
            if t.op == "apply":
                sigs[t.value] = (tuple(a.sort for a in t.args), t.sort)
    return sigs


def sorts_used(terms: Iterable[Term]) -> set[Sort]:
    out: set[Sort] = set()

    def add(s: Sort):
        if s in out:
            return
        out.add(s)
        if s.kind == "Array":
            add(s.index)
            add(s.elem)

    for root in terms:
        for t in walk(root):
            add(t.sort)
            for a in t.args:
                add(a.sort)
            if t.op in ("forall", "exists"):
                for _, s in t.value:
                    add(s)
    return out


def _has_bound(t: Term) -> bool:
    return any(s.op == "bound" for s in walk(t))


def applications(term: Term, names: set[str]) -> list[Term]:
    """Ground applications of the named functions, innermost first."""
    out: list[Term] = []
    seen = set()

    def visit(t: Term):
        if t in seen:
            return
        seen.add(t)
        for a in t.args:
            visit(a)
        if t.op == "apply" and t.value in names and not any(_has_bound(a) for a in t.args):
            out.append(t)

    visit(term)
    return out


def rewrite(term: Term, fn: Callable[[Term, tuple], Term | None]) -> Term:
    """Bottom-up rebuild; ``fn(t, new_args)`` may return a replacement."""
    memo: dict[Term, Term] = {}

    def go(t: Term) -> Term:
        if t in memo:
            return memo[t]
        new_args = tuple(go(a) for a in t.args)
        out = fn(t, new_args)
        if out is None:
            out = t if new_args == t.args else rebuild(t, new_args)
        memo[t] = out
        return out

    return go(term)


def rebuild(t: Term, args: tuple) -> Term:
    if t.op in ("lit", "sym", "bound"):
        return t
    if t.op == "apply":
        return apply(t.value, args, t.sort)
    if t.op in ("forall", "exists"):
        return quant(t.op, t.value, args[0])
    if t.op == "const_array":
        return const_array(t.sort, args[0])
    return mk(t.op, *args, value=t.value)


def substitute(term: Term, mapping: Mapping[Term, Term]) -> Term:
    if not mapping:
        return term
    return rewrite(term, lambda t, _args: mapping.get(t))


def expand_functions(term: Term, bodies: Mapping[str, tuple[tuple[str, ...], Term]]) -> Term:
    """Macro-expand applications of functions given as (param names, body)."""
    if not bodies:
        return term

    def fn(t, args):
        if t.op == "apply" and t.value in bodies:
            params, body = bodies[t.value]
            binding = {bound(p, a.sort): a for p, a in zip(params, args)}
            return substitute(body, binding)
        return None

    return rewrite(term, fn)


# --- printing --------------------------------------------------------------


def literal_to_smt(value, sort: Sort) -> str:
    if sort.kind == "Bool":
        return "true" if value else "false"
    if sort.kind == "Int":
        return str(value) if value >= 0 else f"(- {-value})"
    if sort.kind == "Real":
        v = Fraction(value)
        mag = abs(v)
        if mag.denominator == 1:
            text = f"{mag.numerator}.0"
        else:
            text = f"(/ {mag.numerator}.0 {mag.denominator}.0)"
        return text if v >= 0 else f"(- {text})"
    if sort.kind == "BitVec":
        return "#b" + format(value, f"0{sort.width}b")
    if sort.kind == "Array" and isinstance(value, ArrayValue):
        text = f"((as const {sort_to_smt(sort)}) {literal_to_smt(value.default, sort.elem)})"
        for k, v in value.stores:
            text = f"(store {text} {literal_to_smt(k, sort.index)} {literal_to_smt(v, sort.elem)})"
        return text
    return smt_symbol(str(value))


def to_smt(term: Term) -> str:
    parts: list[str] = []

    def emit(t: Term):
        op = t.op
        if op == "lit":
            parts.append(literal_to_smt(t.value, t.sort))
        elif op == "sym":
            parts.append(smt_symbol(t.value.name))
        elif op == "bound":
            parts.append(smt_symbol(t.value))
        elif op == "apply":
            if not t.args:
                parts.append(smt_symbol(t.value))
                return
            parts.append("(" + smt_symbol(t.value))
            for a in t.args:
                parts.append(" ")
                emit(a)
            parts.append(")")
        elif op in ("forall", "exists"):
            binders = " ".join(f"({smt_symbol(n)} {sort_to_smt(s)})" for n, s in t.value)
            parts.append(f"({op} ({binders}) ")
            emit(t.args[0])
            parts.append(")")
        elif op == "const_array":
            parts.append(f"((as const {sort_to_smt(t.sort)}) ")
            emit(t.args[0])
            parts.append(")")
        else:
            head = f"(_ extract {t.value[0]} {t.value[1]})" if op == "extract" else op
            parts.append("(" + head)
            for a in t.args:
                parts.append(" ")
                emit(a)
            parts.append(")")

    emit(term)
    return "".join(parts)


# --- evaluation ------------------------------------------------------------


class EvalError(Exception):
    pass


class DivisionByZero(EvalError):
    pass


def smt_div(x: int, y: int) -> int:
    if y == 0:
        raise DivisionByZero("integer division by zero")
    r = x % abs(y)
    return (x - r) // y


def smt_mod(x: int, y: int) -> int:
    if y == 0:
        raise DivisionByZero("integer modulus by zero")
    return x % abs(y)


def _signed(v: int, w: int) -> int:
    return v - (1 << w) if v >= 1 << (w - 1) else v


def _finite_domain(sort: Sort):
    if sort.kind == "Bool":
        return [False, True]
    if sort.kind == "Enum":
        return list(sort.members)
    if sort.kind == "BitVec" and sort.width <= 8:
        return list(range(1 << sort.width))
    raise EvalError(f"cannot enumerate sort {sort}")


def evaluate(term: Term, env: Mapping[str, object],
             funcs: Callable[[str, tuple, Sort], object] | None = None,
             missing: Callable[[Term], object] | None = None):
    """Evaluate ``term`` given values for its symbolic constants.

    ``env`` maps symbolic-constant names to values, ``funcs`` interprets
    function applications, and ``missing`` supplies values for constants not
    in ``env`` (otherwise a KeyError-like EvalError is raised).
    """

    def ev(t: Term, bvars: dict):
        op = t.op
        if op == "lit":
            return t.value
        if op == "sym":
            name = t.value.name
            if name in env:
                return env[name]
            if missing is not None:
                return missing(t)
            raise EvalError(f"no value for {name}")
        if op == "bound":
            if t.value in bvars:
                return bvars[t.value]
            raise EvalError(f"unbound variable {t.value}")
        if op == "apply":
            vals = tuple(ev(a, bvars) for a in t.args)
            if funcs is None:
                raise EvalError(f"no interpretation for {t.value}")
            return funcs(t.value, vals, t.sort)
        if op in ("forall", "exists"):
            names = [n for n, _ in t.value]
            domains = [_finite_domain(s) for _, s in t.value]
            results = (ev(t.args[0], {**bvars, **dict(zip(names, combo))})
                       for combo in itertools.product(*domains))
            return all(results) if op == "forall" else any(results)
        if op == "const_array":
            return ArrayValue.make(ev(t.args[0], bvars))
        if op == "ite":
            return ev(t.args[1], bvars) if ev(t.args[0], bvars) else ev(t.args[2], bvars)
        if op == "and":
            return all(ev(a, bvars) for a in t.args)
        if op == "or":
            return any(ev(a, bvars) for a in t.args)
        if op == "=>":
            return (not ev(t.args[0], bvars)) or ev(t.args[1], bvars)
        vals = [ev(a, bvars) for a in t.args]
        return _apply_op(t, vals)

    return ev(term, {})


def _apply_op(t: Term, vals: list):
    op = t.op
    if op == "not":
        return not vals[0]
    if op == "xor":
        out = False
        for v in vals:
            out ^= bool(v)
        return out
    if op == "=":
        return all(v == vals[0] for v in vals[1:])
    if op == "distinct":
        return len(set(map(repr, vals))) == len(vals)
    if op == "<":
        return vals[0] < vals[1]
    if op == "<=":
        return vals[0] <= vals[1]
    if op == ">":
        return vals[0] > vals[1]
    if op == ">=":
        return vals[0] >= vals[1]
    if op == "+":
        return sum(vals[1:], vals[0])
    if op == "-":
        if len(vals) == 1:
            return -vals[0]
        out = vals[0]
        for v in vals[1:]:
            out = out - v
        return out
    if op == "*":
        out = vals[0]
        for v in vals[1:]:
            out = out * v
        return out
    if op == "div":
        out = vals[0]
        for v in vals[1:]:
            out = smt_div(out, v)
        return out
    if op == "mod":
        return smt_mod(vals[0], vals[1])
    if op == "abs":
        return abs(vals[0])
    if op == "/":
        if vals[1] == 0:
            raise DivisionByZero("real division by zero")
        return Fraction(vals[0]) / Fraction(vals[1])
    if op == "to_real":
        return Fraction(vals[0])
    if op == "select":
        return vals[0].select(vals[1])
    if op == "store":
        return vals[0].store(vals[1], vals[2])
    w = t.args[0].sort.width
    mask = (1 << w) - 1 if w else 0
    if op == "bvadd":
        return (vals[0] + vals[1]) & mask
    if op == "bvsub":
        return (vals[0] - vals[1]) & mask
    if op == "bvmul":
        return (vals[0] * vals[1]) & mask
    if op == "bvudiv":
        return mask if vals[1] == 0 else vals[0] // vals[1]
    if op == "bvurem":
        return vals[0] if vals[1] == 0 else vals[0] % vals[1]
    if op == "bvand":
        return vals[0] & vals[1]
    if op == "bvor":
        return vals[0] | vals[1]
    if op == "bvxor":
        return vals[0] ^ vals[1]
    if op == "bvshl":
        return (vals[0] << vals[1]) & mask if vals[1] < w else 0
    if op == "bvlshr":
        return vals[0] >> vals[1] if vals[1] < w else 0
    if op == "bvashr":
        s = _signed(vals[0], w)
        return (s >> min(vals[1], w)) & mask
    if op == "bvnot":
        return ~vals[0] & mask
    if op == "bvneg":
        return -vals[0] & mask
    if op == "bvult":
        return vals[0] < vals[1]
    if op == "bvule":
        return vals[0] <= vals[1]
    if op == "bvugt":
        return vals[0] > vals[1]
    if op == "bvuge":
        return vals[0] >= vals[1]
    if op in ("bvslt", "bvsle", "bvsgt", "bvsge"):
        a, b = _signed(vals[0], w), _signed(vals[1], w)
        return {"bvslt": a < b, "bvsle": a <= b, "bvsgt": a > b, "bvsge": a >= b}[op]
    if op == "concat":
        out = 0
        for a, v in zip(t.args, vals):
            out = (out << a.sort.width) | v
        return out
    if op == "extract":
        hi, lo = t.value
        return (vals[0] >> lo) & ((1 << (hi - lo + 1)) - 1)
    raise EvalError(f"cannot evaluate operator {op}")
