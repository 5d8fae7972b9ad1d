"""Source spans, diagnostics and the exceptions that carry them."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int
    len: int = 0
    offset: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


NO_SPAN = Span("<builtin>", 1, 1, 0)


def cover(first: Span, last: Span) -> Span:
    """Smallest span starting at `first` and ending where `last` ends."""
    end = last.offset + last.len
    return Span(first.file, first.line, first.col, max(0, end - first.offset), first.offset)


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    span: Span = NO_SPAN
    expected: tuple[str, ...] = ()

    def __str__(self) -> str:
        text = f"{self.span}: {self.kind}: {self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text


class UclidError(Exception):
    """Base error; carries one or more diagnostics."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, Diagnostic):
            diagnostics = [diagnostics]
        self.diagnostics: list[Diagnostic] = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))

    @property
    def kind(self) -> str:
        return self.diagnostics[0].kind


class FrontendError(UclidError):
    """LexError / ParseError."""


class ElaborationError(UclidError):
    """Typechecking and lowering failures."""


def fail(kind: str, message: str, span: Span = NO_SPAN, cls=ElaborationError):
    raise cls(Diagnostic(kind, message, span))
