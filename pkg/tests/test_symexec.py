import pytest
from hypothesis import given, settings, strategies as st

from uclid_mini.symexec import (collect_obligations, concrete_interpret, init_state, step, unroll)
from uclid_mini.proof import prepare
from uclid_mini.terms import DivisionByZero, evaluate, symbols, to_smt

from conftest import load, load_text
from modelgen import differential_mismatches, random_model


def test_fib_init_state():
    s = init_state(load("fib.ucl"))
    assert s.step == 0
    assert {v: to_smt(t) for v, t in s.env.items()} == {"a": "0", "b": "1"}
    assert s.assumptions == []


def test_uninitialised_variable_is_fresh():
    s = init_state(load_text("module m { var x : integer; }"))
    assert to_smt(s.env["x"]) == "|x@0|"


def test_mp_grounded_axioms_in_assumptions():
    s = init_state(load("mp.ucl"))
    # nine axioms, each grounded to one conjunction
    assert len(s.axioms) == 9
    fetch = [t for t in s.axioms if "IF" in to_smt(t) and "EX" in to_smt(t)]
    assert fetch


def test_fib_step_terms_unsimplified():
    m = load("fib.ucl")
    s1 = step(init_state(m), m)
    assert s1.step == 1
    assert to_smt(s1.env["a"]) == "1"
    assert to_smt(s1.env["b"]) == "(+ 0 1)"


def test_empty_next_keeps_env_and_refreshes_inputs():
    m = load_text("module m { var x : integer; input i : integer; init { x = 3; } }")
    s1 = step(init_state(m), m)
    assert to_smt(s1.env["x"]) == "3"
    assert to_smt(s1.env["i"]) == "|i@1|"


def test_counter_three_steps():
    m = load("counter.ucl")
    s = unroll(m, 3)[-1]
    assert to_smt(s.env["x"]) == "(+ (+ (+ 0 1) 1) 1)"
    assert evaluate(s.env["x"], {}) == 3


def test_obligation_names_fib_depth_two():
    m = load("fib.ucl")
    obls = collect_obligations(unroll(m, 2), m)
    names = [o.name for o in obls if o.spec == "a_le_b"]
    assert names == ["a_le_b@0", "a_le_b@1", "a_le_b@2"]


def test_no_specs_no_obligations():
    m = load_text("module m { var x : integer; next { x' = x; } }")
    assert collect_obligations(unroll(m, 3), m) == []


def test_det_obligations_over_trace_env():
    m = prepare(load("det.ucl"))
    states = unroll(m, 1)
    assert [o.name for o in collect_obligations(states, m)] == ["det_xy@0", "det_xy@1"]
    assert set(states[0].env) == {"i.1", "y.1", "i.2", "y.2"}


def test_obligation_count_formula():
    src = """module m { var x : integer; init { x = 0; }
      next { assert nonneg : x >= 0; x' = x + 1; }
      invariant a : x >= 0; invariant b : x < 100; }"""
    m = load_text(src)
    k = 4
    obls = collect_obligations(unroll(m, k), m)
    # k transitions each reach the inline assert once
    assert len(obls) == k + (k + 1) * 2


def test_concrete_fib():
    assert concrete_interpret(load("fib.ucl"), k=5).values("a") == [0, 1, 1, 2, 3, 5]


def test_concrete_counter_k0():
    assert concrete_interpret(load("counter.ucl"), k=0).values("x") == [0]


def test_concrete_swap():
    tr = concrete_interpret(load("swap.ucl"), k=3)
    assert tr.values("a") == [0, 0, 0, 0] and tr.values("b") == [0, 0, 0, 0]


def test_division_by_zero_reports_step():
    m = load_text("module m { var x, y : integer; init { x = 4; y = 2; } next { y' = y - 1; x' = x div y; } }")
    with pytest.raises(DivisionByZero, match="step 3"):
        concrete_interpret(m, k=4)


def test_bitvector_wraps():
    m = load_text("module m { var w : bv4; init { w = 14bv4; } next { w' = w + 3bv4; } }")
    assert concrete_interpret(m, k=2).values("w") == [14, 1, 4]


def test_real_arithmetic_exact():
    from fractions import Fraction
    m = load_text("module m { var r : real; init { r = 0.1; } next { r' = r * 3.0; } }")
    assert concrete_interpret(m, k=2).values("r") == [Fraction(1, 10), Fraction(3, 10), Fraction(9, 10)]


def test_one_sided_if_frames_the_other_branch():
    m = load_text("""module m { var x : integer; input i : integer; init { x = 0; }
      next { if (i > 0) { x' = x + i; } } }""")
    inputs = [{"i": 0}, {"i": 2}, {"i": -1}, {"i": 3}]
    tr = concrete_interpret(m, inputs, k=3)
    assert tr.values("x") == [0, 0, 2, 2]
    env = {f"i@{j}": v["i"] for j, v in enumerate(inputs)}
    assert [evaluate(s.env["x"], env) for s in unroll(m, 3)] == [0, 0, 2, 2]


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_step_indexing_monotone(seed):
    m = load_text(random_model(seed))
    for s in unroll(m, 4):
        for t in symbols(list(s.env.values()) + s.assumptions):
            assert 0 <= t.value.step <= s.step


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_differential_property(seed):
    assert differential_mismatches(seed, k=6) == []


def test_hyper_env_doubles_domain():
    m = load("det.ucl")
    composed = prepare(m)
    assert len(init_state(composed).env) == 2 * len(m.variables)
