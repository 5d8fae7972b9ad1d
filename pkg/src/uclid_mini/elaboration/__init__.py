"""Typechecking and lowering to a flat, loop-free, quantifier-grounded module."""

from __future__ import annotations

from ..frontend import ast as A
from ..frontend.printer import pretty_print
from .model import (DEFAULT_CONTROL, Define, Function, Group, Spec, TypedModule, Variable,
                    resolve_type, sort_to_type)
from .passes import (eliminate_loops, flatten_instances, ground_finite_quantifiers, inline_procedures,
                     main_module, number_tags)
from .typecheck import Program, typecheck

__all__ = [
    "DEFAULT_CONTROL", "Define", "Function", "Group", "Program", "Spec", "TypedModule", "Variable",
    "elaborate", "eliminate_loops", "flatten", "flatten_instances", "ground_finite_quantifiers",
    "inline_procedures", "main_module", "number_tags", "resolve_type", "sort_to_type", "to_ast",
    "emit_elaborated", "typecheck",
]


def flatten(modules, main: str | None = None) -> TypedModule:
    """Typecheck and flatten instances only (calls, loops and quantifiers kept)."""
    return number_tags(flatten_instances(typecheck(modules), main))


def elaborate(modules, main: str | None = None) -> TypedModule:
    """Full pipeline: typecheck, flatten, inline, remove loops, ground quantifiers."""
    m = flatten_instances(typecheck(modules), main)
    m = inline_procedures(m)
    m = eliminate_loops(m)
    m = ground_finite_quantifiers(m)
    return number_tags(m)


def to_ast(m: TypedModule) -> A.Module:
    """Surface module equivalent to ``m`` (reparses and re-elaborates to ``m``)."""
    decls: list = list(m.type_decls)
    decls += [f.decl for f in m.functions.values()]
    for v in m.variables:
        decls.append(A.VarDecl(v.kind, (v.name,), v.type))
    decls += [g.decl for g in m.groups.values()]
    decls += [d.decl for d in m.defines.values()]
    decls += list(m.procedures.values())
    if m.init:
        decls.append(A.InitBlock(m.init))
    if m.next:
        decls.append(A.NextBlock(m.next))
    decls += [A.Invariant(s.name, s.expr) for s in m.invariants]
    decls += [A.HyperInvariant(s.arity, s.name, s.expr) for s in m.hyperinvariants]
    decls += [A.Axiom(s.name, s.expr) for s in m.axioms]
    decls += [A.HyperAxiom(s.arity, s.name, s.expr) for s in m.hyperaxioms]
    return A.Module(m.name, tuple(decls), A.ControlBlock(tuple(m.control)))


def emit_elaborated(m: TypedModule) -> str:
    return pretty_print(to_ast(m))
