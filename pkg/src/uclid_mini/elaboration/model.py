"""Flat, typed module representation produced by elaboration."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..diagnostics import NO_SPAN, Span, fail
from ..frontend import ast as A
from ..terms import BOOL, INT, REAL, Sort, bv, array

DEFAULT_CONTROL = (A.Command("induction"), A.Command("check"), A.Command("print_results"))


@dataclass(frozen=True)
class Variable:
    name: str
    sort: Sort
    kind: str  # var | input | output | const
    type: A.Type
    owner: str = ""  # instance path ("" for the main module)
    trace: int = 0  # copy index after self-composition, 0 before
    base: str = ""  # name before self-composition


@dataclass(frozen=True)
class Function:
    """Uninterpreted, synthesis or oracle function signature."""

    name: str
    params: tuple[tuple[str, Sort], ...]
    ret: Sort
    kind: str  # uninterpreted | synth | oracle
    decl: A.Decl
    binary: str = ""

    @property
    def arg_sorts(self) -> tuple[Sort, ...]:
        return tuple(s for _, s in self.params)


@dataclass(frozen=True)
class Define:
    name: str
    params: tuple[tuple[str, Sort], ...]
    ret: Sort
    body: A.Expr
    decl: A.DefineDecl


@dataclass(frozen=True)
class Group:
    name: str
    sort: Sort
    elems: tuple[A.Expr, ...]
    decl: A.GroupDecl


@dataclass(frozen=True)
class Spec:
    name: str
    expr: A.Expr
    arity: int = 1
    span: Span = NO_SPAN


@dataclass
class TypedModule:
    name: str
    path: str = "<input>"
    type_decls: tuple[A.TypeDecl, ...] = ()
    sorts: dict[str, Sort] = field(default_factory=dict)
    enum_members: dict[str, Sort] = field(default_factory=dict)
    variables: tuple[Variable, ...] = ()
    functions: dict[str, Function] = field(default_factory=dict)
    defines: dict[str, Define] = field(default_factory=dict)
    groups: dict[str, Group] = field(default_factory=dict)
    procedures: dict[str, A.ProcedureDecl] = field(default_factory=dict)
    init: tuple[A.Stmt, ...] = ()
    next: tuple[A.Stmt, ...] = ()
    invariants: tuple[Spec, ...] = ()
    hyperinvariants: tuple[Spec, ...] = ()
    axioms: tuple[Spec, ...] = ()
    hyperaxioms: tuple[Spec, ...] = ()
    control: tuple[A.Command, ...] = DEFAULT_CONTROL
    arity: int = 0  # number of self-composed copies, 0 if not composed

    def replace(self, **changes) -> "TypedModule":
        return replace(self, **changes)

    @property
    def var_map(self) -> dict[str, Variable]:
        return {v.name: v for v in self.variables}

    def var(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def funcs_of_kind(self, kind: str) -> dict[str, Function]:
        return {n: f for n, f in self.functions.items() if f.kind == kind}

    @property
    def synth_funs(self) -> dict[str, Function]:
        return self.funcs_of_kind("synth")

    @property
    def oracle_funs(self) -> dict[str, Function]:
        return self.funcs_of_kind("oracle")

    @property
    def hyper_arity(self) -> int:
        return max((s.arity for s in self.hyperinvariants + self.hyperaxioms), default=0)

    def resolve(self, t: A.Type) -> Sort:
        return resolve_type(t, self.sorts)


_BUILTIN = {"integer": INT, "boolean": BOOL, "real": REAL, "int": INT, "bool": BOOL}


def resolve_type(t: A.Type, sorts: dict[str, Sort]) -> Sort:
    if isinstance(t, A.TypeName):
        if t.name in _BUILTIN:
            return _BUILTIN[t.name]
        if t.name in sorts:
            return sorts[t.name]
        fail("UnknownIdentifier", f"unknown type {t.name!r}", t.span)
    if isinstance(t, A.BVType):
        return bv(t.width)
    if isinstance(t, A.ArrayType):
        return array(resolve_type(t.index, sorts), resolve_type(t.elem, sorts))
    fail("TypeMismatch", "inline enum types are only allowed in type declarations", t.span)


def sort_to_type(s: Sort) -> A.Type:
    """Surface type naming a sort (inverse of resolve_type for declared names)."""
    if s.kind == "Bool":
        return A.TypeName("boolean")
    if s.kind == "Int":
        return A.TypeName("integer")
    if s.kind == "Real":
        return A.TypeName("real")
    if s.kind == "BitVec":
        return A.BVType(s.width)
    if s.kind == "Array":
        return A.ArrayType(sort_to_type(s.index), sort_to_type(s.elem))
    return A.TypeName(s.name)
