"""Deterministic SMT-LIB v2 emission."""

from __future__ import annotations

from typing import Iterable

from ..terms import Sort, Term, function_signatures, not_, smt_symbol, sort_to_smt, sorts_used, symbols, to_smt


class UnsupportedSort(Exception):
    pass


def _sort_key(s: Sort):
    return (s.kind, s.name)


def sort_declarations(terms: Iterable[Term]) -> list[str]:
    """Declarations of the enumeration and uninterpreted sorts ``terms`` mention."""
    lines: list[str] = []
    named = sorted({s for s in sorts_used(list(terms)) if s.kind in ("Enum", "Uninterp")}, key=_sort_key)
    for s in named:
        if s.kind == "Enum":
            if not s.members:
                raise UnsupportedSort(f"enumeration {s.name} has no members")
            ctors = " ".join(f"({smt_symbol(c)})" for c in s.members)
            lines.append(f"(declare-datatypes (({smt_symbol(s.name)} 0)) (({ctors})))")
        else:
            lines.append(f"(declare-sort {smt_symbol(s.name)} 0)")
    return lines


def declarations(terms: Iterable[Term]) -> list[str]:
    """Sort, function and constant declarations for everything ``terms`` mention."""
    terms = list(terms)
    lines = sort_declarations(terms)
    for name, (args, ret) in sorted(function_signatures(terms).items()):
        params = " ".join(sort_to_smt(a) for a in args)
        lines.append(f"(declare-fun {smt_symbol(name)} ({params}) {sort_to_smt(ret)})")
    for c in ordered_symbols(terms):
        if c.value.step < 0:
            raise UnsupportedSort(f"internal placeholder {c.value.name} reached the backend")
        lines.append(f"(declare-const {smt_symbol(c.value.name)} {sort_to_smt(c.sort)})")
    return lines


def ordered_symbols(terms: Iterable[Term]) -> list[Term]:
    """Free symbolic constants sorted by (step, trace, name)."""
    return sorted(symbols(terms), key=lambda t: (t.value.step, t.value.trace, t.value.name))


def emit_query(assertions: Iterable[Term], title: str = "", get_model: bool = False) -> str:
    """Script asserting every term, then check-sat."""
    assertions = list(assertions)
    out = []
    if title:
        out.append(f"; {title}")
    out.append("(set-option :produce-models true)")
    out.append("(set-logic ALL)")
    out += declarations(assertions)
    out += [f"(assert {to_smt(a)})" for a in assertions]
    out.append("(check-sat)")
    if get_model:
        out.append("(get-model)")
    return "\n".join(out) + "\n"


def vc_assertions(vc, extra: Iterable[Term] = ()) -> list[Term]:
    """Assertions whose satisfiability decides ``vc`` (negated goal last)."""
    return list(vc.assumptions) + list(extra) + [not_(vc.goal)]


def emit_smtlib(vc, extra: Iterable[Term] = ()) -> str:
    """SMT-LIB script for a verification condition: assumptions and the negated goal."""
    return emit_query(vc_assertions(vc, extra), vc.name)
