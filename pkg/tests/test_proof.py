import io

import pytest

from uclid_mini.proof import (FAIL, OBSERVABLE, PASS, UNKNOWN, UNOBSERVABLE, CheckConfig, RunConfig, bmc, check_all,
                              cex_lines, induct, prepare, run_control, self_compose, verify_procedure)
from uclid_mini.diagnostics import UclidError
from uclid_mini.smt import SolverConfig
from uclid_mini.synth import CandidateFunction, apply_and_reverify
from uclid_mini.terms import INT, TRUE, bound, mk

from conftest import CORPUS_FILES, check_cfg, load, load_text, needs_z3
from replay import replay_violates

pytestmark = needs_z3


def golden_h():
    return {"h": CandidateFunction("h", (("x", INT), ("y", INT)), mk(">=", bound("x", INT), _zero()))}


def _zero():
    from uclid_mini.terms import int_lit
    return int_lit(0)


def verdicts(vcs, cfg=None):
    return {r.name: r.verdict for r in check_all(vcs, cfg or check_cfg())}


def test_bmc_counter_six_pass():
    vcs = bmc(load("counter.ucl"), 5)
    assert len(vcs) == 6
    assert set(verdicts(vcs).values()) == {PASS}


def test_bmc_depth_zero():
    m = load_text("module m { var x : integer; init { x = 1; } invariant one : x == 1; }")
    vcs = bmc(m, 0)
    assert [v.name for v in vcs] == ["one@0"] and verdicts(vcs) == {"one@0": PASS}


def test_fib_without_aux_step_fails():
    v = verdicts(induct(load("fib-noaux.ucl")))
    assert v == {"a_le_b@0": PASS, "a_le_b@step": FAIL}


def test_fib_golden_candidate_passes():
    res = apply_and_reverify(load("fib.ucl"), golden_h(), check_cfg())
    assert res.passed and [r.verdict for r in res] == [PASS] * 4


def test_fib_true_candidate_fails_step():
    true_h = {"h": CandidateFunction("h", (("x", INT), ("y", INT)), TRUE)}
    res = apply_and_reverify(load("fib.ucl"), true_h, check_cfg())
    assert res.by_name("a_le_b@step").verdict == FAIL
    assert res.by_name("a_le_b@0").verdict == PASS


def test_swap_needs_two_induction():
    m = load("swap.ucl")
    assert verdicts(induct(m, 1))["a_zero@step"] == FAIL
    assert set(verdicts(induct(m, 2)).values()) == {PASS}


def test_verify_swap_procedure():
    m = load("swap.ucl")
    assert set(verdicts(verify_procedure(m, "swap_vals")).values()) == {PASS}


def test_verify_wrong_ensures_gives_prestate_witness():
    src = """module m { var a, b : integer;
      procedure s() modifies a, b; ensures a == old(a); { var t : integer; t = a; a = b; b = t; } }"""
    m = load_text(src)
    (r,) = check_all(verify_procedure(m, "s"), check_cfg())
    assert r.verdict == FAIL
    pre = r.cex.state(0)
    assert pre["a"] != pre["b"]


def test_countdown_loop_invariant_vcs():
    m = load("countdown.ucl")
    v = verdicts(verify_procedure(m, "countdown"))
    assert any(n.endswith("_exit@0") for n in v) and set(v.values()) == {PASS}


def test_too_strong_loop_invariant_fails():
    src = """module m { var x : integer;
      procedure c() requires x > 0; ensures x == 0; modifies x;
      { while (x > 0) invariant x > 0; { x = x - 1; } } }"""
    v = verdicts(verify_procedure(load_text(src), "c"))
    assert any(n.endswith("_exit@0") and s == FAIL for n, s in v.items())


def test_self_compose_det():
    m = load("det.ucl")
    c = self_compose(m, 2)
    assert len(c.variables) == 2 * len(m.variables)
    assert [s.name for s in c.invariants] == ["det_xy"]
    from uclid_mini.frontend import ast as A
    for s in c.invariants + c.axioms:
        assert not any(isinstance(n, A.TraceIdent) for n in A.iter_nodes(s.expr))


def test_self_compose_arity_one():
    m = load("counter.ucl")
    c = self_compose(m, 1)
    assert [v.name for v in c.variables] == ["x.1"]
    assert [s.name for s in c.invariants] == ["x_nonneg.1"]
    assert set(verdicts(induct(c)).values()) == {PASS}


def test_self_compose_index_out_of_arity():
    m = load_text("module m { var y : integer; hyperinvariant[3] d : y.3 == y.1; }")
    with pytest.raises(UclidError) as err:
        self_compose(m, 2)
    assert err.value.kind == "IndexOutOfArity"


def test_det_passes_and_relaxed_fails_with_differing_inputs():
    assert set(verdicts(induct(load("det.ucl"))).values()) == {PASS}
    res = check_all(induct(load("det-relaxed.ucl")), check_cfg())
    r = res.by_name("det_xy@step")
    assert r.verdict == FAIL
    s0 = r.cex.state(0)
    assert s0["i.1"] != s0["i.2"]
    last = r.cex.state(r.cex.steps[-1][0])
    assert last["y.1"] != last["y.2"]


def _props(m):
    names = [s.name for s in prepare(m).invariants]
    return names


def _passing_k(m):
    for k in (1, 2):
        res = check_all(induct(m, k), check_cfg())
        if res.passed:
            return k
    return None


SOUNDNESS = [f for f in CORPUS_FILES if f not in ("fib.ucl", "prime-synth.ucl", "control.ucl", "infeasible.ucl")]


@pytest.mark.parametrize("name", SOUNDNESS)
def test_induction_implies_bmc(name):
    m = load(name)
    if not prepare(m).invariants:
        pytest.skip("no invariants")
    k = _passing_k(m)
    if k is None:
        pytest.skip("not inductive")
    for j in range(6):
        res = check_all(bmc(m, j), check_cfg())
        assert res.passed, (name, j, [r.line() for r in res if r.verdict != PASS])


@pytest.mark.parametrize("name", ["counter.ucl", "swap.ucl", "det.ucl", "counters.ucl"])
def test_k_induction_monotone(name):
    m = load(name)
    for k in (1, 2):
        if check_all(induct(m, k), check_cfg()).passed:
            assert check_all(induct(m, k + 1), check_cfg()).passed


@pytest.mark.parametrize("name,cmd", [("fib-noaux.ucl", "induct"), ("det-relaxed.ucl", "induct"),
                                      ("swap.ucl", "induct")])
def test_fail_traces_replay(name, cmd):
    m = load(name)
    fails = [r for r in check_all(induct(m, 1), check_cfg()) if r.verdict == FAIL]
    assert fails
    for r in fails:
        assert replay_violates(m, r)


def test_bmc_fail_trace_replays():
    src = """module main { var x : integer; input i : integer; init { x = 0; }
      next { x' = x + i; } invariant small : x < 5; }"""
    m = load_text(src)
    res = check_all(bmc(m, 3), check_cfg())
    fails = [r for r in res if r.verdict == FAIL]
    assert fails and all(replay_violates(m, r) for r in fails)


def test_assert_fail_trace_replays():
    src = """module main { var x : integer; input i : integer; init { x = 0; }
      next { assert bounded : x + i < 3; x' = x + i; } }"""
    m = load_text(src)
    fails = [r for r in check_all(bmc(m, 2), check_cfg()) if r.verdict == FAIL]
    assert fails and all(replay_violates(m, r) for r in fails)


def test_results_keep_declaration_order():
    vcs = bmc(load("counter.ucl"), 5) + induct(load("counter.ucl"))
    serial = [r.name for r in check_all(vcs, CheckConfig(SolverConfig(), jobs=1))]
    parallel = [r.name for r in check_all(vcs, CheckConfig(SolverConfig(), jobs=8))]
    assert serial == parallel == [v.name for v in vcs]


def _run(name, **kw):
    out = io.StringIO()
    rep = run_control(load(name), RunConfig(out=out, **kw))
    return rep, out.getvalue()


def test_run_control_mp():
    rep, text = _run("mp.ucl")
    assert [r.verdict for r in rep.result] == [UNOBSERVABLE] and rep.exit_code == 0
    assert text.startswith("UNOBSERVABLE check_sat@0 [")


def test_run_control_mp_relaxed_observable():
    rep, _ = _run("mp-relaxed.ucl")
    (r,) = rep.result
    assert r.verdict == OBSERVABLE and r.cex is not None


def test_expectation_mismatch_fails():
    src = """module main { var x : integer; axiom a : x == 1;
      control { check_sat expect unobservable; check; } }"""
    rep = run_control(load_text(src), RunConfig(out=io.StringIO()))
    assert rep.exit_code == 1
    assert "(expected unobservable)" in rep.lines[0]


def test_bmc_zero_on_axioms_only_is_observability():
    src = """module main { var r : integer; axiom a : r == 1 && r == 2;
      control { bmc(0); check; } }"""
    rep = run_control(load_text(src), RunConfig(out=io.StringIO()))
    assert [r.verdict for r in rep.result] == [UNOBSERVABLE]


def test_run_control_default_script():
    src = "module main { var x : integer; init { x = 0; } next { x' = x; } invariant z : x == 0; }"
    rep = run_control(load_text(src), RunConfig(out=io.StringIO()))
    assert [r.name for r in rep.result] == ["z@0", "z@step"] and rep.exit_code == 0


def test_missing_solver_gives_unknown_exit_2():
    rep = run_control(load("counter.ucl"), RunConfig(solver=SolverConfig("/nonexistent/z3"), out=io.StringIO()))
    assert {r.verdict for r in rep.result} == {UNKNOWN} and rep.exit_code == 2


def test_print_cex_lines_filtered():
    out = io.StringIO()
    rep = run_control(load("det-relaxed.ucl"), RunConfig(out=out))
    r = rep.result.by_name("det_xy@step")
    lines = cex_lines(r.cex, ["y"])
    assert lines and all(l.split(":")[1].strip().startswith("y.") for l in lines)
    assert lines[0].startswith("step 0: y.1 = ")


def test_report_line_format():
    rep, text = _run("counter.ucl")
    import re
    assert all(re.fullmatch(r"PASS \S+ \[\d+ms\]", l) for l in text.splitlines())
