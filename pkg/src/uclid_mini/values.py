"""Concrete values shared by the interpreter, model parser and trace printer.

Booleans are ``bool``, integers ``int``, reals ``fractions.Fraction``,
bitvectors unsigned ``int`` (width comes from the sort), enum members and
uninterpreted-sort elements ``str``, arrays :class:`ArrayValue`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _key(v):
    return (type(v).__name__, repr(v))


@dataclass(frozen=True)
class ArrayValue:
    """A total array: a default element overridden at finitely many indices."""

    default: object
    stores: tuple = ()

    @classmethod
    def make(cls, default, entries=()) -> "ArrayValue":
        table = {}
        for k, v in entries:
            table[k] = v
        items = tuple(sorted(((k, v) for k, v in table.items() if v != default), key=lambda kv: _key(kv[0])))
        return cls(default, items)

    def select(self, index):
        for k, v in self.stores:
            if k == index:
                return v
        return self.default

    def store(self, index, value) -> "ArrayValue":
        entries = [kv for kv in self.stores if kv[0] != index]
        entries.append((index, value))
        return ArrayValue.make(self.default, entries)


def default_value(sort):
    """Value used for symbols a model leaves unassigned."""
    kind = sort.kind
    if kind == "Bool":
        return False
    if kind == "Int":
        return 0
    if kind == "Real":
        return Fraction(0)
    if kind == "BitVec":
        return 0
    if kind == "Enum":
        return sort.members[0]
    if kind == "Array":
        return ArrayValue.make(default_value(sort.elem))
    return f"{sort.name}!val!0"


def format_value(value, sort=None) -> str:
    """Human-readable, uclid-mini flavoured rendering of a value."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if sort is not None and sort.kind == "BitVec":
        return f"{value}bv{sort.width}"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return f"{value.numerator}.0"
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, ArrayValue):
        idx = sort.index if sort is not None else None
        elem = sort.elem if sort is not None else None
        parts = [f"default: {format_value(value.default, elem)}"]
        parts += [f"{format_value(k, idx)} -> {format_value(v, elem)}" for k, v in value.stores]
        return "[" + ", ".join(parts) + "]"
    return str(value)
