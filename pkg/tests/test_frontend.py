import re

import pytest
from hypothesis import given, settings, strategies as st

from uclid_mini.diagnostics import FrontendError
from uclid_mini.frontend import ast as A, parse, parse_expr, parse_file, pretty_print, tokenize
from uclid_mini.frontend.lexer import _PUNCT, KEYWORDS
from uclid_mini.frontend.parser import _TIERS

from conftest import CORPUS, CORPUS_FILES, ROOT


def test_fib_parses_to_one_main_module():
    mods = parse_file(CORPUS / "fib.ucl")
    assert [m.name for m in mods] == ["main"]
    decls = mods[0].decls
    assert any(isinstance(d, A.Invariant) and d.name == "a_le_b" for d in decls)
    assert any(isinstance(d, A.SynthFunDecl) and d.name == "h" for d in decls)
    assert [c.name for c in mods[0].control.commands] == ["induction", "synthesize", "check", "print_results"]


def test_empty_module():
    (m,) = parse("module m { }")
    assert m.name == "m" and m.decls == () and m.control is None


def test_missing_expression_points_at_semicolon():
    text = "module m { var x: integer; init { x = ; } }"
    with pytest.raises(FrontendError) as err:
        parse(text)
    d = err.value.diagnostics[0]
    assert d.kind == "ParseError"
    assert (d.span.line, d.span.col) == (1, text.index("= ;") + 3)
    assert "expression" in d.expected


def test_illegal_character_is_lex_error():
    with pytest.raises(FrontendError) as err:
        parse("module m { var x : integer; init { x = 1 $ 2; } }")
    assert err.value.kind == "LexError"


@pytest.mark.parametrize("name", CORPUS_FILES)
def test_round_trip(name):
    mods = parse_file(CORPUS / name)
    text = "\n".join(pretty_print(m) for m in mods)
    assert parse(text) == mods


@pytest.mark.parametrize("name", CORPUS_FILES)
def test_pretty_print_idempotent(name):
    once = [pretty_print(m) for m in parse_file(CORPUS / name)]
    twice = [pretty_print(m) for m in parse("\n".join(once))]
    assert once == twice


def test_case_guards_keep_order():
    src = """module m { var x : integer;
      next { case x == 2 : { x' = 0; } x == 0 : { x' = 1; } true : { x' = 2; } esac } }"""
    (m,) = parse(src)
    text = pretty_print(m)
    assert text.index("x == 2") < text.index("x == 0") < text.index("true")
    assert parse(text)[0] == m


def test_pretty_print_format():
    (m,) = parse("module m { var x : integer; init { if (x > 0) { x = 1; } } }")
    lines = pretty_print(m).splitlines()
    assert lines[0] == "module m {"
    assert all((len(l) - len(l.lstrip(" "))) % 2 == 0 for l in lines)
    assert "    if (x > 0) {" in lines


def test_precedence_and_right_assoc_implication():
    e = parse_expr("a ==> b ==> c")
    assert isinstance(e, A.Binary) and e.op == "==>" and isinstance(e.rhs, A.Binary) and e.rhs.op == "==>"
    e = parse_expr("a || b && c")
    assert e.op == "||" and e.rhs.op == "&&"
    e = parse_expr("1 + 2 * 3 < 7")
    assert e.op == "<" and e.lhs.op == "+"


def test_trace_index_and_old():
    assert parse_expr("y.2") == A.TraceIdent("y", 2)
    assert parse_expr("old(x)") == A.Old("x")


def test_bitvector_width_limit():
    with pytest.raises(FrontendError):
        parse("module m { var x : bv65; }")
    with pytest.raises(FrontendError):
        parse_expr("16bv4")


def test_duplicate_init_block_rejected():
    with pytest.raises(FrontendError):
        parse("module m { init { } init { } }")


def _spanned(node):
    return [n for n in A.iter_nodes(node) if n.span.file != "<builtin>"]


@pytest.mark.parametrize("name", CORPUS_FILES)
def test_span_soundness(name):
    text = (CORPUS / name).read_text()
    for mod in parse(text, name):
        for n in _spanned(mod):
            sp = n.span
            chunk = text[sp.offset:sp.offset + sp.len]
            assert 0 <= sp.offset and sp.offset + sp.len <= len(text)
            assert sp.line == text.count("\n", 0, sp.offset) + 1
            if isinstance(n, A.Ident):
                assert chunk == n.name
            elif isinstance(n, (A.IntLit, A.BoolLit, A.RealLit, A.BVLit, A.Binary, A.Apply, A.Select)):
                # an expression's span re-parses to the same expression
                assert parse_expr(chunk) == n


def _token_offsets(text):
    return [t.span.offset for t in tokenize(text, "f")[:-1]]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CORPUS_FILES), st.integers(min_value=0), st.sampled_from(["$", "`", "#"]))
def test_error_locality(name, which, bad):
    text = (CORPUS / name).read_text()
    offsets = _token_offsets(text)
    at = offsets[which % len(offsets)]
    broken = text[:at] + bad + " " + text[at:]
    line = text.count("\n", 0, at) + 1
    with pytest.raises(FrontendError) as err:
        parse(broken, name)
    assert any(d.span.line == line for d in err.value.diagnostics)


def test_grammar_document_in_sync():
    ebnf = (ROOT / "docs" / "grammar.ebnf").read_text()
    terminals = set(re.findall(r'"([^"]+)"', ebnf))
    missing = (set(KEYWORDS) | set(_PUNCT) | set(A.COMMANDS) | {op for tier in _TIERS for op in tier}) - terminals
    assert not missing, f"grammar.ebnf lacks {sorted(missing)}"
