"""Synthesis queries: exists f. forall x. AND_i P_i(f, x), emitted as SyGuS-IF."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..elaboration import Function, TypedModule
from ..smt.emit import ordered_symbols, sort_declarations
from ..symexec import Translator
from ..terms import Term, apply, bound, eq, function_signatures, lit, smt_symbol, sort_to_smt, to_smt
from ..vc import VerificationCondition


class NoSynthFun(Exception):
    pass


@dataclass
class SynthesisProblem:
    """Functions to find, universally quantified constants and one constraint per condition."""

    synth_funs: list[Function]
    universals: list[Term]
    constraints: list[Term]
    vcs: list[VerificationCondition]
    oracles: dict[str, Function] = field(default_factory=dict)
    grammars: dict[str, str] = field(default_factory=dict)
    name: str = "main"

    @property
    def fun_names(self) -> list[str]:
        return [f.name for f in self.synth_funs]


def _params(f: Function) -> str:
    return " ".join(f"({smt_symbol(n)} {sort_to_smt(s)})" for n, s in f.params)


def grammar_text(f: Function, m: TypedModule) -> str:
    """SyGuS grammar block for a synthesis function declared with productions."""
    decl = f.decl
    if not getattr(decl, "grammar", ()):
        return ""
    tr = Translator(m)
    nts = [(nt.name, m.resolve(nt.type)) for nt in decl.grammar]
    scope = {n: bound(n, s) for n, s in f.params}
    scope.update({n: bound(n, s) for n, s in nts})
    heads = " ".join(f"({smt_symbol(n)} {sort_to_smt(s)})" for n, s in nts)
    rules = []
    for nt, (name, s) in zip(decl.grammar, nts):
        prods = " ".join(to_smt(tr.expr(p, {}, None, scope)) for p in nt.productions)
        rules.append(f"({smt_symbol(name)} {sort_to_smt(s)} ({prods}))")
    return f"\n  ({heads})\n  ({' '.join(rules)})"


def build_synthesis_query(vcs: list[VerificationCondition], synth_funs, m: TypedModule | None = None,
                          oracles: Mapping[str, Function] | None = None) -> SynthesisProblem:
    """Every condition becomes the constraint ``assumptions => goal``."""
    funs = list(synth_funs.values()) if isinstance(synth_funs, Mapping) else list(synth_funs)
    if not funs:
        raise NoSynthFun("no synthesis function declared")
    constraints = [vc.formula() for vc in vcs]
    universals = ordered_symbols(constraints)
    grammars = {f.name: grammar_text(f, m) for f in funs} if m is not None else {}
    return SynthesisProblem(funs, universals, constraints, list(vcs), dict(oracles or {}), grammars,
                            m.name if m is not None else "main")


def emit_sygus(problem: SynthesisProblem, table: Mapping[tuple[str, tuple], object] | None = None) -> str:
    """SyGuS-IF v2 script for ``problem``.

    Oracle functions are not expressible in plain SyGuS; each one becomes an
    auxiliary synthesis function constrained by the finite table of answers
    known so far.
    """
    lines = ["(set-logic ALL)"]
    lines += sort_declarations(problem.constraints)
    for f in problem.synth_funs:
        lines.append(f"(synth-fun {smt_symbol(f.name)} ({_params(f)}) {sort_to_smt(f.ret)}"
                     f"{problem.grammars.get(f.name, '')})")
    sigs = function_signatures(problem.constraints)
    used_oracles = [o for n, o in sorted(problem.oracles.items()) if n in sigs]
    for o in used_oracles:
        lines.append(f"(synth-fun {smt_symbol(o.name)} ({_params(o)}) {sort_to_smt(o.ret)})")
    skip = set(problem.fun_names) | {o.name for o in used_oracles}
    for name, (args, ret) in sorted(sigs.items()):
        if name not in skip:
            params = " ".join(sort_to_smt(a) for a in args)
            lines.append(f"(declare-fun {smt_symbol(name)} ({params}) {sort_to_smt(ret)})")
    for u in problem.universals:
        lines.append(f"(declare-var {smt_symbol(u.value.name)} {sort_to_smt(u.sort)})")
    for (name, args), value in (table or {}).items():
        o = problem.oracles.get(name)
        if o is None or name not in sigs:
            continue
        app = apply(name, [lit(a, s) for a, s in zip(args, o.arg_sorts)], o.ret)
        lines.append(f"(constraint {to_smt(eq(app, lit(value, o.ret)))})")
    for c in problem.constraints:
        lines.append(f"(constraint {to_smt(c)})")
    lines.append("(check-synth)")
    return "\n".join(lines) + "\n"
