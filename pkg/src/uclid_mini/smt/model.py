"""Parsing solver models into concrete values."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..terms import BOOL, INT, REAL, Sort, array, bv, smt_div, smt_mod, uninterp
from ..values import ArrayValue, default_value
from .sexp import Quoted, SexpError, name_of, parse_all, to_text


class ModelParseError(Exception):
    def __init__(self, message: str, sexp=None):
        if sexp is not None:
            message = f"{message}: {to_text(sexp)}"
        super().__init__(message)


class FuncArray:
    """Array value given by a function from indices to elements."""

    def __init__(self, fn, overrides=()):
        self.fn = fn
        self.overrides = tuple(overrides)

    def select(self, index):
        for k, v in reversed(self.overrides):
            if k == index:
                return v
        return self.fn(index)

    def store(self, index, value):
        return FuncArray(self.fn, self.overrides + ((index, value),))

    def __repr__(self) -> str:
        return f"FuncArray({self.overrides})"


@dataclass
class ModelFunction:
    name: str
    params: tuple[tuple[str, Sort], ...]
    ret: Sort
    body: object
    model: "SmtModel"

    def __call__(self, *args):
        env = {n: a for (n, _), a in zip(self.params, args)}
        return _coerce(self.model.ev(self.body, env), self.ret)


@dataclass
class SmtModel:
    """Values of constants and interpretations of functions from one model."""

    defs: dict = field(default_factory=dict)  # name -> (params, ret sort, body)
    sorts: Mapping[str, Sort] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict)

    @property
    def constants(self) -> dict:
        return {n: self.value(n) for n, (ps, _, _) in self.defs.items() if not ps}

    def __contains__(self, name: str) -> bool:
        return name in self.defs

    def value(self, name: str, sort: Sort | None = None):
        if name not in self.defs:
            if sort is None:
                raise KeyError(name)
            return default_value(sort)
        if name not in self._cache:
            params, ret, body = self.defs[name]
            if params:
                self._cache[name] = ModelFunction(name, params, ret, body, self)
            else:
                self._cache[name] = _coerce(self.ev(body, {}), ret)
        return self._cache[name]

    def call(self, name: str, args: tuple, sort: Sort):
        """Interpretation callback in the shape :func:`terms.evaluate` expects."""
        if name not in self.defs:
            return default_value(sort)
        v = self.value(name)
        if isinstance(v, ModelFunction):
            return v(*args)
        return v

    # -- expression evaluation ------------------------------------------

    def ev(self, x, env: dict):
        if isinstance(x, list):
            return self._ev_list(x, env)
        if isinstance(x, tuple):
            return x[1]
        name = name_of(x)
        if name in env:
            return env[name]
        if not isinstance(x, Quoted):
            lit = _atom(name)
            if lit is not None:
                return lit
        if name in self.defs:
            v = self.value(name)
            return v
        return name  # enum member or uninterpreted-sort element

    def _ev_list(self, x: list, env: dict):
        if not x:
            raise ModelParseError("empty application", x)
        head = x[0]
        if isinstance(head, list):
            if len(head) == 3 and head[0] == "as" and head[1] == "const":
                return ArrayValue.make(self.ev(x[1], env))
            if head and head[0] == "_" and len(head) == 3 and head[1] == "as-array":
                return FuncArray(self._fn(name_of(head[2])))
            raise ModelParseError("unsupported application", x)
        op = name_of(head)
        ev = lambda y: self.ev(y, env)  # noqa: E731
        if op == "_":
            if len(x) == 3 and isinstance(x[1], str) and x[1].startswith("bv"):
                return int(x[1][2:])
            if len(x) == 3 and x[1] == "as-array":
                return FuncArray(self._fn(name_of(x[2])))
            raise ModelParseError("unsupported indexed form", x)
        if op == "as":
            return ev(x[1])
        if op == "let":
            inner = dict(env)
            for b in x[1]:
                inner[name_of(b[0])] = self.ev(b[1], env)
            return self.ev(x[2], inner)
        if op == "lambda":
            params = [name_of(p[0]) for p in x[1]]
            body = x[2]

            def fn(*args, _p=params, _b=body, _env=dict(env)):
                return self.ev(_b, {**_env, **dict(zip(_p, args))})

            return FuncArray(fn)
        if op == "ite":
            return ev(x[2]) if ev(x[1]) else ev(x[3])
        if op == "and":
            return all(ev(a) for a in x[1:])
        if op == "or":
            return any(ev(a) for a in x[1:])
        if op == "=>":
            return (not ev(x[1])) or bool(ev(x[2]))
        args = [ev(a) for a in x[1:]]
        if op == "not":
            return not args[0]
        if op == "=":
            return all(a == args[0] for a in args[1:])
        if op == "distinct":
            return len(set(map(repr, args))) == len(args)
        if op == "-":
            if len(args) == 1:
                return -args[0]
            out = args[0]
            for a in args[1:]:
                out -= a
            return out
        if op == "+":
            return sum(args[1:], args[0])
        if op == "*":
            out = args[0]
            for a in args[1:]:
                out *= a
            return out
        if op == "/":
            return Fraction(args[0]) / Fraction(args[1])
        if op == "div":
            return smt_div(args[0], args[1])
        if op == "mod":
            return smt_mod(args[0], args[1])
        if op == "abs":
            return abs(args[0])
        if op == "to_real":
            return Fraction(args[0])
        if op in ("<", "<=", ">", ">="):
            a, b = args
            return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[op]
        if op == "select":
            return args[0].select(args[1])
        if op == "store":
            return args[0].store(args[1], args[2])
        if op in self.defs:
            f = self.value(op)
            return f(*args) if isinstance(f, ModelFunction) else f
        raise ModelParseError(f"unsupported operator {op}", x)

    def _fn(self, name: str):
        f = self.value(name)
        if not isinstance(f, ModelFunction):
            raise ModelParseError(f"{name} is not a function")
        return f


def _atom(text: str):
    if text == "true":
        return True
    if text == "false":
        return False
    if text.startswith("#b"):
        return int(text[2:], 2)
    if text.startswith("#x"):
        return int(text[2:], 16)
    if text[:1].isdigit():
        if "." in text:
            return Fraction(text)
        return int(text)
    return None


def _coerce(v, sort: Sort):
    if sort.kind == "Real" and isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    if sort.kind == "Int" and isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    if sort.kind == "Array" and isinstance(v, ArrayValue):
        return ArrayValue.make(_coerce(v.default, sort.elem),
                               [(_coerce(k, sort.index), _coerce(e, sort.elem)) for k, e in v.stores])
    return v


def parse_sort(x, sorts: Mapping[str, Sort]) -> Sort:
    if isinstance(x, list):
        if len(x) == 3 and x[0] == "_" and x[1] == "BitVec":
            return bv(int(x[2]))
        if len(x) == 3 and name_of(x[0]) == "Array":
            return array(parse_sort(x[1], sorts), parse_sort(x[2], sorts))
        raise ModelParseError("unsupported sort", x)
    name = name_of(x)
    builtin = {"Int": INT, "Bool": BOOL, "Real": REAL}
    if name in builtin:
        return builtin[name]
    return sorts.get(name) or uninterp(name)


def parse_model(text: str, sorts: Mapping[str, Sort] | None = None) -> SmtModel:
    """Parse ``(get-model)`` output (with or without the leading ``model`` atom)."""
    sorts = dict(sorts or {})
    try:
        items = parse_all(text)
    except SexpError as exc:
        raise ModelParseError(str(exc)) from None
    if len(items) == 1 and isinstance(items[0], list) and all(isinstance(i, list) for i in items[0][1:] or [[]]):
        items = items[0]
    if items and items[0] == "model":
        items = items[1:]
    model = SmtModel(sorts=sorts)
    for it in items:
        if not isinstance(it, list) or not it:
            raise ModelParseError("unexpected model entry", it)
        head = name_of(it[0]) if not isinstance(it[0], list) else ""
        if head in ("declare-fun", "declare-sort", "declare-datatypes", "declare-datatype"):
            continue  # cardinality comments / sort declarations
        if head == "define-fun" and len(it) == 5:
            name = name_of(it[1])
            params = tuple((name_of(p[0]), parse_sort(p[1], sorts)) for p in it[2])
            model.defs[name] = (params, parse_sort(it[3], sorts), it[4])
        elif head == "define-fun-rec":
            raise ModelParseError("recursive definitions are not supported", it)
        elif head == "forall":
            continue  # z3 universe constraints for uninterpreted sorts
        else:
            raise ModelParseError("unexpected model entry", it)
    return model


def parse_literal(text: str, sort: Sort):
    """Parse one SMT-LIB literal of ``sort`` (used for oracle replies)."""
    items = parse_all(text)
    if len(items) != 1:
        raise ModelParseError(f"expected one literal, got {text.strip()!r}")
    v = _coerce(SmtModel().ev(items[0], {}), sort)
    if not _well_sorted(v, sort):
        raise ModelParseError(f"literal {text.strip()!r} is not of sort {sort}")
    return v


def _well_sorted(v, sort: Sort) -> bool:
    k = sort.kind
    if k == "Bool":
        return isinstance(v, bool)
    if k == "Int":
        return isinstance(v, int) and not isinstance(v, bool)
    if k == "Real":
        return isinstance(v, Fraction)
    if k == "BitVec":
        return isinstance(v, int) and not isinstance(v, bool) and 0 <= v < (1 << sort.width)
    if k == "Enum":
        return v in sort.members
    return True
