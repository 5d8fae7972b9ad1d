"""Candidate substitution, re-verification and the oracle-aware synthesis loop."""

from __future__ import annotations

import os
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from ..elaboration import TypedModule
from ..proof.engine import control_vcs
from ..proof.results import CheckConfig, ProofResult, check_all
from ..smt import OracleSession, SolverConfig, write_emitted
from ..smt.solver import default_sygus_solver
from ..terms import SortError, expand_functions
from ..vc import VerificationCondition
from .candidate import CandidateFunction, CandidateParseError, parse_candidate
from .problem import SynthesisProblem, emit_sygus

SUCCESS, INFEASIBLE, UNKNOWN = "SUCCESS", "INFEASIBLE", "UNKNOWN"
DEFAULT_SYMO_BUDGET = 16


class SubstitutionSortError(Exception):
    pass


def substitute_candidates(vc: VerificationCondition, candidates: dict[str, CandidateFunction]):
    bodies = {c.name: (c.param_names, c.body) for c in candidates.values()}
    try:
        ex = lambda t: expand_functions(t, bodies)  # noqa: E731
        envs = [{k: ex(v) for k, v in env.items()} for env in vc.envs]
        return vc.with_terms([ex(a) for a in vc.assumptions], ex(vc.goal), envs)
    except SortError as exc:
        raise SubstitutionSortError(str(exc)) from None


def reverify(vcs: list[VerificationCondition], candidates: dict[str, CandidateFunction], cfg: CheckConfig,
             session: OracleSession | None = None, expect: dict[str, str] | None = None) -> ProofResult:
    """Macro-expand the candidates into every condition and check them again."""
    return check_all([substitute_candidates(vc, candidates) for vc in vcs], cfg, session, expect)


def apply_and_reverify(m: TypedModule, candidates: dict[str, CandidateFunction], cfg: CheckConfig,
                       session: OracleSession | None = None) -> ProofResult:
    """Re-run the proof commands of ``m`` with the synthesis functions defined by ``candidates``."""
    missing = set(m.synth_funs) - set(candidates)
    if missing:
        raise ValueError(f"no candidate for {', '.join(sorted(missing))}")
    return reverify(control_vcs(m), candidates, cfg, session)


@dataclass
class SynthConfig:
    sygus: SolverConfig = field(default_factory=lambda: SolverConfig(default_sygus_solver()))
    check: CheckConfig = field(default_factory=CheckConfig)
    budget: int = DEFAULT_SYMO_BUDGET


@dataclass
class SynthResult:
    status: str  # SUCCESS | INFEASIBLE | UNKNOWN
    candidates: dict[str, CandidateFunction] = field(default_factory=dict)
    proof: ProofResult | None = None
    reason: str = ""
    iterations: int = 0
    scripts: list[str] = field(default_factory=list)


def run_sygus(script: str, cfg: SolverConfig) -> tuple[str, str]:
    """Run the synthesis solver; returns (stdout, failure reason)."""
    cmd = cfg.command or default_sygus_solver()
    probe = SolverConfig(cmd, cfg.timeout)
    try:
        if probe.uses_file:
            with tempfile.TemporaryDirectory() as tmp:
                path = os.path.join(tmp, "query.sl")
                Path(path).write_text(script)
                proc = subprocess.run(probe.argv(path), capture_output=True, text=True, timeout=cfg.timeout)
        else:
            proc = subprocess.run(probe.argv(), input=script + "(exit)\n", capture_output=True, text=True,
                                  timeout=cfg.timeout)
    except (FileNotFoundError, PermissionError) as exc:
        return "", f"spawn failed: {exc}"
    except subprocess.TimeoutExpired:
        return "", "synthesis timeout"
    return proc.stdout, ""


def symo_loop(problem: SynthesisProblem, cfg: SynthConfig, session: OracleSession | None = None) -> SynthResult:
    """Synthesize, re-verify, and grow the oracle table until a candidate survives.

    Oracle applications are answered in the synthesis query only at points
    already in the session table; a candidate that fails re-verification
    after the oracles were asked about new points triggers another round.
    """
    scripts: list[str] = []
    last: ProofResult | None = None
    for it in range(1, cfg.budget + 1):
        before = len(session.table) if session else 0
        script = emit_sygus(problem, session.table if session else None)
        scripts.append(script)
        write_emitted(cfg.sygus, problem.name, script, ".sl")
        out, err = run_sygus(script, cfg.sygus)
        if err:
            return SynthResult(UNKNOWN, reason=err, iterations=it, scripts=scripts)
        try:
            cands = parse_candidate(out, problem)
        except CandidateParseError as exc:
            status = INFEASIBLE if exc.infeasible else UNKNOWN
            return SynthResult(status, reason=str(exc), iterations=it, scripts=scripts)
        last = reverify(problem.vcs, cands, cfg.check, session)
        if last.passed:
            return SynthResult(SUCCESS, cands, last, iterations=it, scripts=scripts)
        grew = session is not None and len(session.table) > before
        if not grew:
            return SynthResult(UNKNOWN, cands, last, "candidate failed re-verification", it, scripts)
    return SynthResult(UNKNOWN, proof=last, reason="synthesis budget", iterations=cfg.budget, scripts=scripts)
