"""Tokenizer for uclid-mini source text."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..diagnostics import Diagnostic, FrontendError, Span

KEYWORDS = frozenset("""
module type var input output const function define synthesis oracle procedure
requires ensures modifies returns init next invariant hyperinvariant axiom
hyperaxiom group instance control assert assume havoc if then else case esac
for while finite_forall finite_exists forall exists in old call true false
enum grammar div mod
""".split())

# longest first
_PUNCT = [
    "<==>", "==>", "::", "==", "!=", "<=", ">=", "&&", "||", "++", "->", "..",
    "{", "}", "(", ")", "[", "]", ";", ":", ",", "=", "<", ">", "+", "-", "*",
    "/", "!", "~", "&", "|", "^", "'", ".",
]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<bvlit>[0-9]+bv[0-9]+)
  | (?P<real>[0-9]+\.[0-9]+)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<punct>""" + "|".join(re.escape(p) for p in _PUNCT) + r""")
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | keyword | int | real | bvlit | string | punct | eof
    text: str
    span: Span

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r}, {self.span.line}:{self.span.col})"


def normalize(text: str) -> str:
    return text.replace("\r\n", "\n").replace("\r", "\n")


def tokenize(text: str, path: str = "<input>") -> list[Token]:
    text = normalize(text)
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text.startswith("/*", pos):
                msg = "unterminated block comment"
            else:
                msg = f"illegal character {text[pos]!r}"
            span = Span(path, line, pos - line_start + 1, 1, pos)
            raise FrontendError(Diagnostic("LexError", msg, span))
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "line_comment", "block_comment"):
            if kind == "ident" and lexeme in KEYWORDS:
                kind = "keyword"
            span = Span(path, line, pos - line_start + 1, len(lexeme), pos)
            tokens.append(Token(kind, lexeme, span))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            line_start = pos + lexeme.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", Span(path, line, pos - line_start + 1, 0, pos)))
    return tokens
