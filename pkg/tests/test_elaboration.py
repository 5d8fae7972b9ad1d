import pytest

from uclid_mini.diagnostics import UclidError
from uclid_mini.elaboration import (eliminate_loops, elaborate, emit_elaborated, flatten, ground_finite_quantifiers,
                                    inline_procedures)
from uclid_mini.elaboration.rewrite import walk_stmts
from uclid_mini.frontend import ast as A, parse, parse_file
from uclid_mini.symexec import concrete_interpret
from uclid_mini.terms import BOOL, INT

from conftest import CORPUS, CORPUS_FILES, load, load_text


def _error(text: str) -> str:
    with pytest.raises(UclidError) as err:
        elaborate(parse(text))
    return err.value.kind


def test_fib_synth_signature():
    m = load("fib.ucl")
    h = m.synth_funs["h"]
    assert h.arg_sorts == (INT, INT) and h.ret == BOOL


def test_bitvector_width_mismatch():
    assert _error("module m { var x : bv8; init { x = 1bv16; } }") == "TypeMismatch"


def test_trace_index_beyond_arity():
    src = "module m { var y : integer; hyperinvariant[2] d : y.3 == y.1; }"
    assert _error(src) == "IndexOutOfArity"


def test_unknown_identifier_and_illegal_assignment():
    assert _error("module m { var x : integer; init { x = z; } }") == "UnknownIdentifier"
    assert _error("module m { input i : integer; next { i' = 1; } }") == "IllegalAssignment"
    assert _error("module m { const c : integer; next { c' = 1; } }") == "IllegalAssignment"


def test_synth_function_must_be_applied_fully():
    src = "module m { synthesis function f(x : integer) : integer; var y : integer; init { y = f(); } }"
    assert _error(src) in ("TypeMismatch", "IllegalExpression")


def test_typecheck_diagnostics_deterministic():
    src = "module m { var x : integer; init { x = true; y = 1; } }"
    msgs = []
    for _ in range(3):
        with pytest.raises(UclidError) as err:
            elaborate(parse(src))
        msgs.append([str(d) for d in err.value.diagnostics])
    assert msgs[0] == msgs[1] == msgs[2]


def test_flatten_two_counter_instances():
    m = load("counters.ucl")
    names = {v.name for v in m.variables}
    assert names == {"c1.x", "c2.x"}
    assert {v.owner for v in m.variables} == {"c1", "c2"}


def test_flatten_without_instances_is_identity():
    src = "module m { var x : integer; init { x = 0; } next { x' = x + 1; } invariant p : x >= 0; }"
    a = flatten(parse(src))
    assert [v.name for v in a.variables] == ["x"]
    assert a.init == parse(src)[0].decls[1].body


def test_cyclic_instantiation():
    src = "module a { instance q : b(); } module b { instance p : a(); } module main { instance r : a(); }"
    assert _error(src) == "CyclicInstantiation"


def test_procedure_called_twice_is_inlined():
    src = """module m { var x : integer;
      procedure inc() modifies x; { x = x + 1; }
      init { x = 5; call inc(); call inc(); } }"""
    m = load_text(src)
    assert not any(isinstance(s, A.Call) for s in walk_stmts(m.init))
    assert concrete_interpret(m, k=0).values("x") == [7]


def test_body_free_procedure_becomes_havoc_assume():
    src = """module m { var x : integer;
      procedure bump() modifies x; ensures x > old(x); ;
      init { x = 0; } next { call bump(); } }"""
    m = load_text(src)
    kinds = [type(s).__name__ for s in walk_stmts(m.next)]
    assert "Havoc" in kinds and "Assume" in kinds and "Call" not in kinds


def test_recursive_procedure_rejected():
    src = "module m { var x : integer; procedure p() modifies x; { call p(); } init { call p(); } }"
    assert _error(src) == "RecursiveProcedure"


def test_for_loop_unrolled():
    src = "module m { var x : integer; init { x = 10; for i in 0..3 { x = x + i; } } }"
    m = load_text(src)
    assert sum(isinstance(s, A.Assign) for s in m.init) == 4
    assert concrete_interpret(m).values("x") == [13]


def test_zero_trip_for_loop():
    src = "module m { var x : integer; init { x = 1; for i in 0..0 { x = x + 7; } } }"
    m = load_text(src)
    assert concrete_interpret(m).values("x") == [1]
    assert not any(isinstance(s, A.For) for s in walk_stmts(m.init))


def test_non_literal_for_bound():
    src = "module m { var x, n : integer; init { for i in 0..n { x = x + 1; } } }"
    assert _error(src) == "NonLiteralForBound"


def test_while_loop_encoding_has_no_loops():
    m = load("countdown.ucl")
    body = m.procedures["countdown"].body
    assert not any(isinstance(s, A.While) for s in walk_stmts(body))


def test_grounding_four_instructions():
    m = load("mp.ucl")
    (ax,) = [a for a in m.axioms if a.name == "fetch_order"]
    conj = _conjuncts(ax.expr)
    assert len(conj) == 4


def _conjuncts(e):
    if isinstance(e, A.Binary) and e.op == "&&":
        return _conjuncts(e.lhs) + _conjuncts(e.rhs)
    return [e]


def _disjuncts(e):
    if isinstance(e, A.Binary) and e.op == "||":
        return _disjuncts(e.lhs) + _disjuncts(e.rhs)
    return [e]


GROUPS = """module m {
  type t = enum { p, q };
  group two : t = { p, q, p };
  group none : t = { };
  var v : [t]boolean;
  axiom all2 : finite_forall (a : t) in two :: finite_forall (b : t) in two :: v[a] || v[b];
  axiom empty_all : finite_forall (a : t) in none :: v[a];
  axiom empty_any : finite_exists (a : t) in none :: v[a];
  axiom any2 : finite_exists (a : t) in two :: v[a];
}"""


def test_grounding_counts_and_empty_groups():
    m = load_text(GROUPS)
    ax = {a.name: a.expr for a in m.axioms}
    assert len(_conjuncts(ax["all2"])) == 4  # |g|^2, duplicates removed
    assert ax["empty_all"] == A.BoolLit(True)
    assert ax["empty_any"] == A.BoolLit(False)
    assert len(_disjuncts(ax["any2"])) == 2


def test_unknown_group():
    src = "module m { type t = enum { p }; var v : [t]boolean; axiom a : finite_forall (x : t) in g :: v[x]; }"
    assert _error(src) == "UnknownGroup"


@pytest.mark.parametrize("name", CORPUS_FILES)
def test_pipeline_output_is_flat(name):
    m = load(name)
    bodies = list(m.init) + list(m.next)
    for p in m.procedures.values():
        bodies += list(p.body or ())
    for s in walk_stmts(bodies):
        assert not isinstance(s, (A.Call, A.For, A.While, A.NextInst, A.Case))
    exprs = [sp.expr for sp in m.invariants + m.axioms + m.hyperinvariants + m.hyperaxioms]
    for e in exprs:
        assert not any(isinstance(n, A.FiniteQuant) for n in A.iter_nodes(e))


@pytest.mark.parametrize("name", CORPUS_FILES)
def test_emit_elaborated_reparses(name):
    m = load(name)
    text = emit_elaborated(m)
    again = elaborate(parse(text))
    assert emit_elaborated(again) == text


@pytest.mark.parametrize("name", ["fib.ucl", "counter.ucl", "swap.ucl", "counters.ucl", "det.ucl"])
def test_lowering_preserves_concrete_semantics(name):
    mods = parse_file(CORPUS / name)
    flat = flatten(mods)
    full = elaborate(mods)
    assert concrete_interpret(flat, k=10).states == concrete_interpret(full, k=10).states


def test_passes_compose_in_any_grouping():
    mods = parse_file(CORPUS / "mp.ucl")
    m = ground_finite_quantifiers(eliminate_loops(inline_procedures(flatten(mods))))
    assert [a.name for a in m.axioms] == [a.name for a in load("mp.ucl").axioms]
