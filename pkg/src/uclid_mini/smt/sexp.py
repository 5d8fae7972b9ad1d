"""A small reader for solver output (SMT-LIB / SyGuS s-expressions)."""

from __future__ import annotations

from dataclasses import dataclass


class SexpError(ValueError):
    pass


@dataclass(frozen=True)
class Quoted:
    """A ``|...|`` symbol, kept apart so that ``|7|`` is not read as 7."""

    name: str

    def __str__(self) -> str:
        return self.name


def tokenize(text: str) -> list:
    out: list = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == ";":
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
        elif c in "()":
            out.append(c)
            i += 1
        elif c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise SexpError("unterminated |symbol|")
            out.append(Quoted(text[i + 1:j]))
            i = j + 1
        elif c == '"':
            j = i + 1
            buf = []
            while True:
                if j >= n:
                    raise SexpError("unterminated string")
                if text[j] == '"':
                    if j + 1 < n and text[j + 1] == '"':
                        buf.append('"')
                        j += 2
                        continue
                    break
                buf.append(text[j])
                j += 1
            out.append(('"', "".join(buf)))
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in '();|"':
                j += 1
            out.append(text[i:j])
            i = j
    return out


def parse_all(text: str) -> list:
    """Every top-level s-expression in ``text``."""
    toks = tokenize(text)
    pos = 0
    out = []

    def read():
        nonlocal pos
        if pos >= len(toks):
            raise SexpError("unexpected end of input")
        t = toks[pos]
        pos += 1
        if t == "(":
            items = []
            while True:
                if pos >= len(toks):
                    raise SexpError("missing )")
                if toks[pos] == ")":
                    pos += 1
                    return items
                items.append(read())
        if t == ")":
            raise SexpError("unexpected )")
        return t

    while pos < len(toks):
        out.append(read())
    return out


def parse_one(text: str):
    items = parse_all(text)
    if len(items) != 1:
        raise SexpError(f"expected one s-expression, found {len(items)}")
    return items[0]


def name_of(x) -> str:
    """Symbol text of an atom (quoted or not)."""
    if isinstance(x, Quoted):
        return x.name
    if isinstance(x, str):
        return x
    raise SexpError(f"expected a symbol, got {to_text(x)}")


def to_text(x) -> str:
    if isinstance(x, list):
        return "(" + " ".join(to_text(i) for i in x) + ")"
    if isinstance(x, Quoted):
        return f"|{x.name}|"
    if isinstance(x, tuple):
        return '"' + x[1].replace('"', '""') + '"'
    return str(x)


def balanced_chunks(stream):
    """Yield complete top-level s-expression texts from an iterable of lines."""
    buf: list[str] = []
    depth = 0
    started = False
    for line in stream:
        for tok in tokenize(line):
            if tok == "(":
                depth += 1
                started = True
            elif tok == ")":
                depth -= 1
        buf.append(line)
        if started and depth == 0:
            yield "".join(buf)
            buf, started = [], False
    rest = "".join(buf).strip()
    if rest:
        yield rest
