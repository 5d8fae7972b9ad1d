import io
import subprocess

import pytest
from hypothesis import given, settings, strategies as st

from uclid_mini.proof import PASS, UNKNOWN, RunConfig, bmc, induct, run_control
from uclid_mini.smt import OracleSession, SolverConfig, bindings_for
from uclid_mini.smt.solver import default_sygus_solver
from uclid_mini.synth import (INFEASIBLE, SUCCESS, CandidateFunction, CandidateParseError, NoSynthFun, SynthConfig,
                              apply_and_reverify, build_synthesis_query, emit_sygus, parse_candidate, symo_loop)
from uclid_mini.terms import INT, TRUE, bound, evaluate, int_lit, mk

from conftest import CORPUS, ROOT, check_cfg, load, load_text, needs_z3

GOLDEN = ROOT / "tests" / "golden"


def fib_problem():
    m = load("fib.ucl")
    return m, build_synthesis_query(induct(m), m.synth_funs, m, m.oracle_funs)


def synth_cfg(budget=16):
    return SynthConfig(SolverConfig(default_sygus_solver(), timeout=30), check_cfg(), budget)


def test_query_one_constraint_per_vc():
    m, p = fib_problem()
    assert len(p.constraints) == len(p.vcs) == 4
    assert p.fun_names == ["h"]
    assert [u.value.name for u in p.universals] == ["a@0", "b@0"]


def test_query_without_synth_fun_raises():
    m = load("counter.ucl")
    with pytest.raises(NoSynthFun):
        build_synthesis_query(induct(m), m.synth_funs, m)


def test_fib_sygus_golden():
    _, p = fib_problem()
    assert emit_sygus(p) == (GOLDEN / "fib_induction.sl").read_text()


def test_sygus_is_deterministic():
    assert emit_sygus(fib_problem()[1]) == emit_sygus(fib_problem()[1])


def test_sygus_zero_universals():
    m = load("prime-synth.ucl")
    p = build_synthesis_query(bmc(m, 0), m.synth_funs, m, m.oracle_funs)
    text = emit_sygus(p)
    assert "declare-var" not in text
    assert "(synth-fun c () Int)" in text and "(synth-fun Prime ((x Int)) Bool)" in text


def test_sygus_oracle_table_constraints():
    m = load("prime-synth.ucl")
    p = build_synthesis_query(bmc(m, 0), m.synth_funs, m, m.oracle_funs)
    text = emit_sygus(p, {("Prime", (9,)): False, ("Prime", (11,)): True})
    assert "(constraint (= (Prime 9) false))" in text
    assert "(constraint (= (Prime 11) true))" in text


def test_sygus_grammar_block():
    src = """module main { var x : integer; init { x = 0; } next { x' = x + 1; }
      synthesis function g(v : integer) : boolean grammar { B : boolean = { v >= 0, v == 0, true }; };
      invariant gi : g(x); control { induction; check; } }"""
    m = load_text(src)
    text = emit_sygus(build_synthesis_query(induct(m), m.synth_funs, m))
    assert "(synth-fun g ((v Int)) Bool\n  ((B Bool))\n  ((B Bool ((>= v 0) (= v 0) true))))" in text


def test_parse_candidate_forms():
    _, p = fib_problem()
    c = parse_candidate("(\n(define-fun h ((x Int) (y Int)) Bool (>= x 0))\n)", p)["h"]
    assert list(c.param_names) == ["x", "y"]
    assert c.body == mk(">=", bound("x", INT), int_lit(0))
    c = parse_candidate("(define-fun h ((u Int) (v Int)) Bool true)", p)["h"]
    assert c.body == TRUE and list(c.param_names) == ["x", "y"]


def test_parse_candidate_infeasible():
    _, p = fib_problem()
    with pytest.raises(CandidateParseError) as err:
        parse_candidate("infeasible\n", p)
    assert err.value.infeasible


@pytest.mark.parametrize("text", ["(define-fun h ((x Int) (y Int)) Int 0)", "(define-fun h ((x Int)) Bool true)",
                                  "(define-fun g ((x Int) (y Int)) Bool true)", "unknown"])
def test_parse_candidate_rejects(text):
    _, p = fib_problem()
    with pytest.raises(CandidateParseError) as err:
        parse_candidate(text, p)
    assert not err.value.infeasible


@settings(max_examples=50, deadline=None)
@given(st.integers(-10**12, 10**12))
def test_candidate_definition_round_trip(n):
    m = load("prime-synth.ucl")
    p = build_synthesis_query(bmc(m, 0), m.synth_funs, m, m.oracle_funs)
    c = CandidateFunction("c", (), int_lit(n))
    assert parse_candidate(c.definition(), p)["c"] == c


@needs_z3
def test_apply_golden_candidate():
    h = CandidateFunction("h", (("x", INT), ("y", INT)), mk(">=", bound("x", INT), int_lit(0)))
    assert apply_and_reverify(load("fib.ucl"), {"h": h}, check_cfg()).passed


@needs_z3
def test_apply_missing_candidate_raises():
    with pytest.raises(ValueError):
        apply_and_reverify(load("fib.ucl"), {}, check_cfg())


@needs_z3
def test_fib_synthesis_single_iteration():
    m, p = fib_problem()
    r = symo_loop(p, synth_cfg())
    assert r.status == SUCCESS and r.iterations == 1
    assert r.proof.passed
    assert apply_and_reverify(m, r.candidates, check_cfg()).passed


@needs_z3
def test_prime_synthesis_result_is_prime():
    m = load("prime-synth.ucl")
    p = build_synthesis_query(bmc(m, 0), m.synth_funs, m, m.oracle_funs)
    r = symo_loop(p, synth_cfg(), OracleSession(bindings_for(m)))
    assert r.status == SUCCESS
    value = evaluate(r.candidates["c"].body, {})
    assert value > 8
    out = subprocess.run([str(CORPUS / "isprime"), str(value)], capture_output=True, text=True).stdout
    assert out.strip() == "true"


@needs_z3
def test_prime_synthesis_budget_one_is_unknown():
    m = load("prime-synth.ucl")
    p = build_synthesis_query(bmc(m, 0), m.synth_funs, m, m.oracle_funs)
    r = symo_loop(p, synth_cfg(budget=1), OracleSession(bindings_for(m)))
    assert r.status in (SUCCESS, UNKNOWN)
    if r.status == UNKNOWN:
        assert r.reason == "synthesis budget"


@needs_z3
def test_two_synthesis_functions_jointly():
    src = """module main { var x : integer; init { x = lo(); } next { if (x < hi()) { x' = x + 1; } }
      synthesis function lo() : integer; synthesis function hi() : integer;
      invariant range : x >= 3 && x <= 5 && hi() == lo() + 2;
      control { induction; synthesize; check; } }"""
    m = load_text(src)
    r = symo_loop(build_synthesis_query(induct(m), m.synth_funs, m), synth_cfg())
    assert r.status == SUCCESS
    assert evaluate(r.candidates["lo"].body, {}) == 3 and evaluate(r.candidates["hi"].body, {}) == 5


@needs_z3
def test_infeasible_module_reports_unknown():
    out = io.StringIO()
    rep = run_control(load("infeasible.ucl"), RunConfig(out=out))
    assert rep.synthesis[0].status == INFEASIBLE
    assert {r.verdict for r in rep.result} == {UNKNOWN} and rep.exit_code == 2
    assert "synthesis infeasible" in out.getvalue()


@needs_z3
def test_fib_run_control_prints_definition():
    out = io.StringIO()
    rep = run_control(load("fib.ucl"), RunConfig(out=out))
    lines = out.getvalue().splitlines()
    assert lines[0].startswith("SYNTHESIZED (define-fun h ((x Int) (y Int)) Bool ")
    assert [l.split()[0] for l in lines[1:]] == [PASS] * 4 and rep.exit_code == 0


@needs_z3
def test_control_gain_is_stabilizing():
    out = io.StringIO()
    rep = run_control(load("control.ucl"), RunConfig(out=out))
    assert rep.exit_code == 0
    k = evaluate(rep.synthesis[0].candidates["K"].body, {})
    assert abs(1.5 - float(k)) < 1
