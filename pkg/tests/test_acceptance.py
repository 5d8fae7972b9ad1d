"""Acceptance criteria, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import contextlib
import io
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from uclid_mini.cli import run as cli_run  # noqa: E402
from uclid_mini.proof import (FAIL, OBSERVABLE, PASS, UNOBSERVABLE, RunConfig, bmc, check_all, check_sat,  # noqa: E402
                              induct, prepare, run_control)
from uclid_mini.smt import OracleSession, SolverConfig, bindings_for, smto_check, solve  # noqa: E402
from uclid_mini.smt.sexp import parse_all, to_text  # noqa: E402
from uclid_mini.synth import SUCCESS, CandidateFunction, apply_and_reverify  # noqa: E402
from uclid_mini.terms import INT, bound, evaluate, int_lit, mk  # noqa: E402

from conftest import CORPUS, CORPUS_FILES, check_cfg, load, needs_z3  # noqa: E402
from modelgen import differential_mismatches  # noqa: E402
from replay import replay_violates  # noqa: E402

CVC5 = [sys.executable, "-m", "uclid_mini.cvc5_driver"]


def _verdicts(results):
    return {r.name: r.verdict for r in results}


def crit_fib():
    m = load("fib.ucl")
    noaux = _verdicts(check_all(induct(load("fib-noaux.ucl")), check_cfg()))
    if noaux.get("a_le_b@step") != FAIL:
        return False, f"step without h: {noaux}"
    t0 = time.monotonic()
    rep = run_control(m, RunConfig(out=io.StringIO()))
    dt = time.monotonic() - t0
    sr = rep.synthesis[0]
    if sr.status != SUCCESS or not rep.result.passed or dt >= 30:
        return False, f"synthesis {sr.status} {sr.reason} in {dt:.1f}s"
    h = CandidateFunction("h", (("x", INT), ("y", INT)), mk(">=", bound("x", INT), int_lit(0)))
    if not apply_and_reverify(m, {"h": h}, check_cfg()).passed:
        return False, "golden h = x>=0 rejected"
    return True, f"step fails without h; synthesized {sr.candidates['h'].definition()} in {dt:.1f}s < 30s"


def crit_mp():
    t0 = time.monotonic()
    (strict,) = check_all(check_sat(load("mp.ucl")), check_cfg())
    (vc,) = check_sat(load("mp-relaxed.ucl"))
    res = solve(vc, SolverConfig())
    dt = time.monotonic() - t0
    if strict.verdict != UNOBSERVABLE or not res.sat:
        return False, f"mp {strict.verdict}, mp-relaxed {res.status}"
    model = res.model
    ok = all(evaluate(t, {}, funcs=model.call, missing=lambda s: model.value(s.value.name, s.sort)) is True
             for t in vc.assumptions)
    return ok and dt < 10, (f"UNOBSERVABLE / OBSERVABLE, witness satisfies {len(vc.assumptions)} grounded axioms "
                            f"by evaluation: {ok}, {dt:.1f}s < 10s")


def crit_det():
    t0 = time.monotonic()
    det = check_all(induct(load("det.ucl")), check_cfg())
    rel = check_all(induct(load("det-relaxed.ucl")), check_cfg()).by_name("det_xy@step")
    if not det.passed or rel.verdict != FAIL:
        return False, f"det {_verdicts(det)}, relaxed {rel.verdict}"
    dt = time.monotonic() - t0
    last = rel.cex.state(rel.cex.steps[-1][0])
    ok = last["y.1"] != last["y.2"] and rel.vc.arity == 2 and dt < 10
    return ok, (f"det passes; relaxed cex over 2 traces ends with y.1={last['y.1']} y.2={last['y.2']}, "
                f"{dt:.2f}s < 10s")


def crit_swap():
    m = load("swap.ucl")
    t0 = time.monotonic()
    one = check_all(induct(m, 1), check_cfg())
    two = check_all(induct(m, 2), check_cfg())
    dt = time.monotonic() - t0
    return (not one.passed and two.passed and dt < 5,
            f"induct(1) {'fails' if not one.passed else 'passes'}, induct(2) "
            f"{'passes' if two.passed else 'fails'}, {dt:.2f}s < 5s")


def crit_smto():
    t0 = time.monotonic()
    s7 = OracleSession(bindings_for(load("prime.ucl")))
    (vc7,) = check_sat(load("prime.ucl"))
    r7 = smto_check(vc7, s7, SolverConfig())
    s4 = OracleSession(bindings_for(load("prime4.ucl")))
    (vc4,) = check_sat(load("prime4.ucl"))
    r4 = smto_check(vc4, s4, SolverConfig())
    dt = time.monotonic() - t0
    ok = dt < 5 and (r7.sat and r7.rounds <= 2 and s7.log == r7.lemmas
          and r4.unsat and len(r4.lemmas) == 1 and s4.log == r4.lemmas)
    return ok, (f"prime7/not8 {r7.status} in {r7.rounds} rounds, prime4 {r4.status} after "
                f"{len(r4.lemmas)} lemma, oracle log equals lemmas: {s7.log == r7.lemmas and s4.log == r4.lemmas}, {dt:.2f}s < 5s")


def crit_differential():
    bad = sum(len(differential_mismatches(seed, 10)) for seed in range(100))
    return bad == 0, f"100 random models x 10 steps, {bad} mismatches"


def _transliterate_sl(text: str) -> str:
    """SyGuS to SMT-LIB, for a second parser: synthesis functions become plain functions."""
    out = []
    for form in parse_all(text):
        head = to_text(form[0]) if isinstance(form, list) and form else ""
        if head == "synth-fun":
            out.append(f"(declare-fun {to_text(form[1])} ({' '.join(to_text(p[1]) for p in form[2])}) "
                       f"{to_text(form[3])})")
        elif head == "declare-var":
            out.append(f"(declare-const {to_text(form[1])} {to_text(form[2])})")
        elif head == "constraint":
            out.append(f"(assert {to_text(form[1])})")
        elif head == "check-synth":
            out.append("(check-sat)")
        else:
            out.append(to_text(form))
    return "\n".join(out) + "\n"


def _first_line(argv, path, timeout=120):
    proc = subprocess.run(argv + [str(path)], capture_output=True, text=True, timeout=timeout)
    return proc.returncode, proc.stdout.strip().splitlines()[0] if proc.stdout.strip() else proc.stderr.strip()


def crit_emission():
    with tempfile.TemporaryDirectory() as d:
        for name in CORPUS_FILES:
            with contextlib.redirect_stdout(io.StringIO()):
                cli_run(["--emit-dir", str(Path(d) / name), str(CORPUS / name)])
        smt2 = sorted(Path(d).glob("*/*.smt2"))
        sl = sorted(Path(d).glob("*/*.sl"))
        problems = []
        for p in smt2:
            _, a = _first_line(["z3"], p)
            _, b = _first_line(CVC5, p)
            if a not in ("sat", "unsat") or a != b:
                problems.append(f"{p.name}: z3 {a!r} cvc5 {b!r}")
        for p in sl:
            code, a = _first_line(CVC5 + ["--sygus"], p)
            if code != 0 or "error" in a:
                problems.append(f"{p.name}: cvc5 {a!r}")
            t = p.with_suffix(".sl.smt2")
            t.write_text(_transliterate_sl(p.read_text()))
            code, b = _first_line(["z3"], t)
            if code != 0 or "error" in b:
                problems.append(f"{p.name}: z3 {b!r}")
    ok = not problems and smt2 and sl
    return ok, f"{len(smt2)} .smt2 and {len(sl)} .sl scripts, {len(problems)} problems {problems[:3]}"


def _inductive_k(m):
    for k in (1, 2):
        if check_all(induct(m, k), check_cfg()).passed:
            return k
    return None


def crit_soundness():
    checked = replayed = 0
    skip = {"fib.ucl", "prime-synth.ucl", "control.ucl", "infeasible.ucl"}
    for name in CORPUS_FILES:
        if name in skip:
            continue
        m = load(name)
        if not prepare(m).invariants:
            continue
        if _inductive_k(m) is not None:
            for j in range(6):
                if not check_all(bmc(m, j), check_cfg()).passed:
                    return False, f"{name} passes induction but fails bmc({j})"
            checked += 1
        for k in (1, 2):
            for r in check_all(induct(m, k), check_cfg()):
                if r.verdict == FAIL:
                    if not replay_violates(m, r):
                        return False, f"{name} {r.name} trace does not replay"
                    replayed += 1
    return checked > 0 and replayed > 0, (f"{checked} inductive modules pass bmc(0..5); "
                                          f"{replayed} FAIL traces replay concretely")


def crit_control():
    rep = run_control(load("control.ucl"), RunConfig(out=io.StringIO()))
    sr = rep.synthesis[0]
    if sr.status != SUCCESS:
        return False, f"synthesis {sr.status}: {sr.reason}"
    k = evaluate(sr.candidates["K"].body, {})
    return abs(1.5 - float(k)) < 1 and rep.result.passed, f"K = {k}, |a - bK| = {abs(1.5 - float(k)):.3f} < 1"


CRITERIA = [
    ("1 fib synthesis", crit_fib),
    ("2 mp observability", crit_mp),
    ("3 det hyperproperty", crit_det),
    ("4 swap k-induction", crit_swap),
    ("5 oracle refinement", crit_smto),
    ("6 differential semantics", crit_differential),
    ("7 emission conformance", crit_emission),
    ("8 soundness cross-checks", crit_soundness),
    ("9 stretch: controller gain", crit_control),
]


def evaluate_criterion(fn):
    t0 = time.monotonic()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return bool(ok), detail, time.monotonic() - t0


@needs_z3
@pytest.mark.parametrize("label,fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(label, fn, capsys):
    ok, detail, dt = evaluate_criterion(fn)
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {label}: {detail} [{dt:.1f}s]")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for label, fn in CRITERIA:
        ok, detail, dt = evaluate_criterion(fn)
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail} [{dt:.1f}s]", flush=True)
    sys.exit(1 if failed else 0)
