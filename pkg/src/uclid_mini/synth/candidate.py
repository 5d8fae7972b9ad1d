"""Reading synthesized function definitions back into terms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..smt.model import parse_sort
from ..smt.sexp import Quoted, SexpError, name_of, parse_all, to_text
from ..terms import (BOOL, INT, REAL, Sort, SortError, Term, apply, bound, bv, function_signatures, lit, mk,
                     sort_to_smt, to_smt)
from .problem import SynthesisProblem


class CandidateParseError(Exception):
    def __init__(self, message: str, infeasible: bool = False):
        super().__init__(message)
        self.infeasible = infeasible


@dataclass(frozen=True)
class CandidateFunction:
    name: str
    params: tuple[tuple[str, Sort], ...]
    body: Term

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.params)

    def definition(self) -> str:
        ps = " ".join(f"({n} {sort_to_smt(s)})" for n, s in self.params)
        return f"(define-fun {self.name} ({ps}) {sort_to_smt(self.body.sort)} {to_smt(self.body)})"


def _as_real(t: Term) -> Term:
    if t.sort == REAL:
        return t
    if t.sort == INT:
        return lit(Fraction(t.value), REAL) if t.is_literal else mk("to_real", t)
    raise SortError(f"cannot use {t.sort} as Real")


def _numeric(args: list[Term]) -> list[Term]:
    if any(a.sort == REAL for a in args) and any(a.sort == INT for a in args):
        return [_as_real(a) for a in args]
    return args


class _Reader:
    def __init__(self, sorts: Mapping[str, Sort], funcs: Mapping[str, tuple[tuple[Sort, ...], Sort]],
                 enum_members: Mapping[str, Sort]):
        self.sorts = sorts
        self.funcs = funcs
        self.enums = enum_members

    def term(self, x, env: Mapping[str, Term]) -> Term:
        if isinstance(x, list):
            return self._list(x, env)
        if isinstance(x, tuple):
            raise CandidateParseError("string literals are not supported")
        name = name_of(x)
        if name in env:
            return env[name]
        if not isinstance(x, Quoted):
            if name in ("true", "false"):
                return lit(name == "true", BOOL)
            if name.startswith("#b"):
                return lit(int(name[2:], 2), bv(len(name) - 2))
            if name.startswith("#x"):
                return lit(int(name[2:], 16), bv(4 * (len(name) - 2)))
            if name[:1].isdigit():
                return lit(Fraction(name), REAL) if "." in name else lit(int(name), INT)
        if name in self.enums:
            return lit(name, self.enums[name])
        if name in self.funcs and not self.funcs[name][0]:
            return apply(name, (), self.funcs[name][1])
        raise CandidateParseError(f"unknown symbol {name!r}")

    def _list(self, x: list, env) -> Term:
        if not x:
            raise CandidateParseError("empty application")
        head = x[0]
        if isinstance(head, list):
            if len(head) == 4 and head[0] == "_" and head[1] == "extract":
                return mk("extract", self.term(x[1], env), value=(int(head[2]), int(head[3])))
            if len(head) == 3 and head[0] == "as" and head[1] == "const":
                return Term("const_array", (self.term(x[1], env),), parse_sort(head[2], self.sorts))
            raise CandidateParseError(f"unsupported form {to_text(x)}")
        op = name_of(head)
        if op == "_" and len(x) == 3 and str(x[1]).startswith("bv"):
            return lit(int(str(x[1])[2:]), bv(int(x[2])))
        if op == "let":
            inner = dict(env)
            for b in x[1]:
                inner[name_of(b[0])] = self.term(b[1], env)
            return self.term(x[2], inner)
        args = [self.term(a, env) for a in x[1:]]
        if op in self.funcs:
            arg_sorts, ret = self.funcs[op]
            args = [_as_real(a) if s == REAL and a.sort == INT else a for a, s in zip(args, arg_sorts)]
            return apply(op, args, ret)
        if op == "-" and len(args) == 1:
            a = args[0]
            if a.is_literal:
                return lit(-a.value, a.sort)
            return mk("-", lit(0, a.sort), a)
        if op in ("+", "-", "*", "<", "<=", ">", ">=", "="):
            args = _numeric(args)
        if op == "/":
            args = [_as_real(a) for a in args]
            if all(a.is_literal for a in args) and args[1].value != 0:
                return lit(args[0].value / args[1].value, REAL)
        if op == "ite":
            c, t, e = args
            t, e = _numeric([t, e])
            args = [c, t, e]
        if op in ("=", "<", "<=", ">", ">=") and len(args) > 2:
            return mk("and", *[mk(op, a, b) for a, b in zip(args, args[1:])])
        if op in ("+", "*") and len(args) > 2:
            out = args[0]
            for a in args[1:]:
                out = mk(op, out, a)
            return out
        if op == "-" and len(args) > 2:
            out = args[0]
            for a in args[1:]:
                out = mk("-", out, a)
            return out
        try:
            return mk(op, *args)
        except SortError as exc:
            raise CandidateParseError(f"{to_text(x)}: {exc}") from None


def parse_candidate(text: str, problem: SynthesisProblem, sorts: Mapping[str, Sort] | None = None,
                    enum_members: Mapping[str, Sort] | None = None) -> dict[str, CandidateFunction]:
    """Parse a SyGuS solver reply into one candidate per synthesis function.

    Definitions of oracle stand-ins are dropped; they only carry the answer
    table and are never substituted.
    """
    stripped = text.strip()
    if stripped.startswith("infeasible") or stripped == "(infeasible)":
        raise CandidateParseError("synthesis problem is infeasible", infeasible=True)
    try:
        items = parse_all(stripped)
    except SexpError as exc:
        raise CandidateParseError(f"unreadable solver output: {exc}") from None
    if len(items) == 1 and isinstance(items[0], list) and items[0] and isinstance(items[0][0], list):
        items = items[0]  # cvc5 wraps all definitions in one list
    sorts = dict(sorts or {})
    wanted = {f.name: f for f in problem.synth_funs}
    funcs = {name: (f.arg_sorts, f.ret) for name, f in problem.oracles.items()}
    for c in problem.constraints:
        funcs.update({n: s for n, s in function_signatures([c]).items() if n not in wanted})
    reader = _Reader(sorts, funcs, dict(enum_members or {}))
    out: dict[str, CandidateFunction] = {}
    for it in items:
        if isinstance(it, str) and it in ("sat", "unsat", "unknown"):
            continue
        if not (isinstance(it, list) and len(it) == 5 and name_of(it[0]) == "define-fun"):
            if isinstance(it, list) and it and it[0] == "error":
                raise CandidateParseError(f"solver error: {to_text(it[1]) if len(it) > 1 else ''}")
            raise CandidateParseError(f"unexpected solver output {to_text(it)}")
        name = name_of(it[1])
        if name not in wanted:
            continue
        f = wanted[name]
        params = tuple((name_of(p[0]), parse_sort(p[1], sorts)) for p in it[2])
        if tuple(s for _, s in params) != f.arg_sorts:
            raise CandidateParseError(f"{name}: parameter sorts do not match the declaration")
        # parameters are read straight into the declared names
        env = {p: bound(d, s) for (p, s), (d, _) in zip(params, f.params)}
        body = reader.term(it[4], env)
        if body.sort == INT and f.ret == REAL:
            body = _as_real(body)
        if body.sort != f.ret:
            raise CandidateParseError(f"{name}: body has sort {body.sort}, expected {f.ret}")
        out[name] = CandidateFunction(name, f.params, body)
    missing = sorted(set(wanted) - set(out))
    if missing:
        raise CandidateParseError(f"no definition for {', '.join(missing)}")
    return out
