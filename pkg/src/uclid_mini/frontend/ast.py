"""Surface syntax tree.

Every node is a frozen dataclass with a keyword-only ``span`` that is
excluded from equality, so two trees compare equal exactly when they are
structurally the same program.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Optional

from ..diagnostics import NO_SPAN, Span


@dataclass(frozen=True)
class Node:
    span: Span = field(default=NO_SPAN, compare=False, repr=False, kw_only=True)


# --- types -----------------------------------------------------------------

@dataclass(frozen=True)
class TypeName(Node):
    name: str  # integer | boolean | real | user-declared name


@dataclass(frozen=True)
class BVType(Node):
    width: int


@dataclass(frozen=True)
class ArrayType(Node):
    index: "Type"
    elem: "Type"


@dataclass(frozen=True)
class EnumType(Node):
    members: tuple[str, ...]


Type = TypeName | BVType | ArrayType | EnumType


# --- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class BoolLit(Node):
    value: bool


@dataclass(frozen=True)
class IntLit(Node):
    value: int


@dataclass(frozen=True)
class RealLit(Node):
    value: Fraction


@dataclass(frozen=True)
class BVLit(Node):
    value: int
    width: int


@dataclass(frozen=True)
class Ident(Node):
    name: str


@dataclass(frozen=True)
class Primed(Node):
    name: str


@dataclass(frozen=True)
class TraceIdent(Node):
    name: str
    index: int


@dataclass(frozen=True)
class Unary(Node):
    op: str  # ! - ~
    arg: "Expr"


@dataclass(frozen=True)
class Binary(Node):
    op: str
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Ite(Node):
    cond: "Expr"
    then: "Expr"
    else_: "Expr"


@dataclass(frozen=True)
class Apply(Node):
    func: str
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Select(Node):
    array: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class Store(Node):
    array: "Expr"
    index: "Expr"
    value: "Expr"


@dataclass(frozen=True)
class Extract(Node):
    arg: "Expr"
    hi: int
    lo: int


@dataclass(frozen=True)
class FiniteQuant(Node):
    kind: str  # finite_forall | finite_exists
    var: str
    type: Type
    group: str
    body: "Expr"


@dataclass(frozen=True)
class Quant(Node):
    kind: str  # forall | exists
    bindings: tuple[tuple[str, Type], ...]
    body: "Expr"


@dataclass(frozen=True)
class Old(Node):
    name: str


Expr = (BoolLit | IntLit | RealLit | BVLit | Ident | Primed | TraceIdent | Unary | Binary
        | Ite | Apply | Select | Store | Extract | FiniteQuant | Quant | Old)


# --- statements ------------------------------------------------------------

@dataclass(frozen=True)
class Assign(Node):
    target: str
    primed: bool
    value: Expr


@dataclass(frozen=True)
class Havoc(Node):
    name: str
    tag: str = field(default="", compare=False)


@dataclass(frozen=True)
class Assert(Node):
    expr: Expr
    label: str = ""
    kind: str = field(default="assert", compare=False)


@dataclass(frozen=True)
class Assume(Node):
    expr: Expr


@dataclass(frozen=True)
class If(Node):
    cond: Expr
    then: tuple["Stmt", ...]
    else_: tuple["Stmt", ...] = ()


@dataclass(frozen=True)
class Case(Node):
    arms: tuple[tuple[Expr, tuple["Stmt", ...]], ...]


@dataclass(frozen=True)
class For(Node):
    var: str
    lo: Expr
    hi: Expr
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class While(Node):
    cond: Expr
    invariants: tuple[tuple[str, Expr], ...]
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class Call(Node):
    lhs: tuple[str, ...]
    proc: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class NextInst(Node):
    instance: str


@dataclass(frozen=True)
class LocalVar(Node):
    name: str
    type: Type
    tag: str = field(default="", compare=False)


Stmt = Assign | Havoc | Assert | Assume | If | Case | For | While | Call | NextInst | LocalVar


# --- declarations ----------------------------------------------------------

Params = tuple[tuple[str, Type], ...]


@dataclass(frozen=True)
class TypeDecl(Node):
    name: str
    type: Optional[Type]  # None: uninterpreted sort


@dataclass(frozen=True)
class VarDecl(Node):
    kind: str  # var | input | output | const
    names: tuple[str, ...]
    type: Type


@dataclass(frozen=True)
class FunctionDecl(Node):
    name: str
    params: Params
    ret: Type


@dataclass(frozen=True)
class DefineDecl(Node):
    name: str
    params: Params
    ret: Type
    body: Expr


@dataclass(frozen=True)
class Nonterminal(Node):
    name: str
    type: Type
    productions: tuple[Expr, ...]


@dataclass(frozen=True)
class SynthFunDecl(Node):
    name: str
    params: Params
    ret: Type
    grammar: tuple[Nonterminal, ...] = ()


@dataclass(frozen=True)
class OracleFunDecl(Node):
    name: str
    params: Params
    ret: Type
    binary: str


@dataclass(frozen=True)
class ProcedureDecl(Node):
    name: str
    params: Params
    returns: Params
    requires: tuple[Expr, ...]
    ensures: tuple[Expr, ...]
    modifies: tuple[str, ...]
    body: Optional[tuple[Stmt, ...]]


@dataclass(frozen=True)
class InitBlock(Node):
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class NextBlock(Node):
    body: tuple[Stmt, ...]


@dataclass(frozen=True)
class InstanceDecl(Node):
    name: str
    module: str
    bindings: tuple[tuple[str, Expr], ...]


@dataclass(frozen=True)
class Invariant(Node):
    name: str
    expr: Expr


@dataclass(frozen=True)
class HyperInvariant(Node):
    arity: int
    name: str
    expr: Expr


@dataclass(frozen=True)
class Axiom(Node):
    name: str
    expr: Expr


@dataclass(frozen=True)
class HyperAxiom(Node):
    arity: int
    name: str
    expr: Expr


@dataclass(frozen=True)
class GroupDecl(Node):
    name: str
    type: Type
    elems: tuple[Expr, ...]


Decl = (TypeDecl | VarDecl | FunctionDecl | DefineDecl | SynthFunDecl | OracleFunDecl
        | ProcedureDecl | InitBlock | NextBlock | InstanceDecl | Invariant | HyperInvariant
        | Axiom | HyperAxiom | GroupDecl)


@dataclass(frozen=True)
class Command(Node):
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class ControlBlock(Node):
    commands: tuple[Command, ...]


@dataclass(frozen=True)
class Module(Node):
    name: str
    decls: tuple[Decl, ...]
    control: Optional[ControlBlock] = None


PROOF_COMMANDS = ("bmc", "induction", "kinduction", "verify", "check_sat")
COMMANDS = PROOF_COMMANDS + ("synthesize", "check", "print_results", "print_cex")


def children(node: Node):
    """Direct child nodes, in field order."""
    for f in fields(node):
        if f.name == "span":
            continue
        yield from _nodes_in(getattr(node, f.name))


def _nodes_in(value):
    if isinstance(value, Node):
        yield value
    elif isinstance(value, tuple):
        for v in value:
            yield from _nodes_in(v)


def iter_nodes(node: Node):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(list(children(n))))


def strip_spans(node):
    """Copy with every span reset (handy for debugging structural diffs)."""
    if isinstance(node, tuple):
        return tuple(strip_spans(v) for v in node)
    if not isinstance(node, Node):
        return node
    changes = {f.name: strip_spans(getattr(node, f.name)) for f in fields(node) if f.name != "span"}
    return replace(node, span=NO_SPAN, **changes)
