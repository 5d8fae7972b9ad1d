"""Verdicts, dispatch of conditions to solvers, and report lines."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..smt import OracleSession, SolverConfig, extract_trace, smto_check, solve
from ..smt.smto import DEFAULT_BUDGET, OracleInvocationError
from ..terms import applications
from ..values import format_value
from ..vc import CexTrace, VerificationCondition

PASS, FAIL, UNKNOWN = "PASS", "FAIL", "UNKNOWN"
OBSERVABLE, UNOBSERVABLE = "OBSERVABLE", "UNOBSERVABLE"


@dataclass
class VcResult:
    vc: VerificationCondition
    verdict: str
    time_ms: int = 0
    cex: CexTrace | None = None
    reason: str = ""
    expect: str = ""  # expected observability for check_sat queries
    rounds: int = 0
    lemmas: list = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.vc.name

    @property
    def failed(self) -> bool:
        if self.verdict == FAIL:
            return True
        if self.verdict in (OBSERVABLE, UNOBSERVABLE) and self.expect:
            return self.verdict != self.expect.upper()
        return False

    @property
    def unknown(self) -> bool:
        return self.verdict == UNKNOWN

    def line(self) -> str:
        text = f"{self.verdict} {self.vc.name} [{self.time_ms}ms]"
        if self.verdict == UNKNOWN and self.reason:
            text += f" ({self.reason})"
        elif self.failed and self.expect:
            text += f" (expected {self.expect})"
        return text


@dataclass
class ProofResult:
    """Results in condition declaration order."""

    results: list[VcResult] = field(default_factory=list)

    def __iter__(self):
        return iter(self.results)

    def __len__(self) -> int:
        return len(self.results)

    def by_name(self, name: str) -> VcResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(not r.failed and not r.unknown for r in self.results)

    @property
    def exit_code(self) -> int:
        if any(r.failed for r in self.results):
            return 1
        if any(r.unknown for r in self.results):
            return 2
        return 0


@dataclass
class CheckConfig:
    solver: SolverConfig = field(default_factory=SolverConfig)
    smto_budget: int = DEFAULT_BUDGET
    jobs: int = 4


def _has_oracles(vc: VerificationCondition, names: set[str]) -> bool:
    return bool(names) and any(applications(t, names) for t in vc.terms())


def check_vc(vc: VerificationCondition, cfg: CheckConfig, session: OracleSession | None = None,
             expect: str = "") -> VcResult:
    """Decide one condition; solver and oracle trouble become UNKNOWN."""
    t0 = time.perf_counter()
    rounds, lemmas = 1, []
    try:
        names = set(session.bindings) if session else set()
        if _has_oracles(vc, names):
            r = smto_check(vc, session, cfg.solver, cfg.smto_budget)
            rounds, lemmas = r.rounds, r.lemmas
        else:
            r = solve(vc, cfg.solver)
    except (OracleInvocationError, OSError) as exc:
        return VcResult(vc, UNKNOWN, _ms(t0), reason=str(exc), expect=expect)
    ms = _ms(t0)
    if r.status == "unsat":
        verdict = UNOBSERVABLE if vc.observe else PASS
        return VcResult(vc, verdict, ms, expect=expect, rounds=rounds, lemmas=lemmas)
    if r.status == "sat":
        try:
            cex = extract_trace(r.model, vc)
        except Exception as exc:  # noqa: BLE001 - a bad model must not hide the verdict
            cex = None
            reason = f"trace reconstruction failed: {exc}"
        else:
            reason = ""
        verdict = OBSERVABLE if vc.observe else FAIL
        return VcResult(vc, verdict, ms, cex, reason, expect, rounds, lemmas)
    return VcResult(vc, UNKNOWN, ms, reason=r.reason or "solver returned unknown", expect=expect,
                    rounds=rounds, lemmas=lemmas)


def _ms(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


def check_all(vcs: list[VerificationCondition], cfg: CheckConfig, session: OracleSession | None = None,
              expect: dict[str, str] | None = None) -> ProofResult:
    """Check conditions concurrently; results keep declaration order."""
    expect = expect or {}
    if cfg.jobs <= 1 or len(vcs) <= 1:
        return ProofResult([check_vc(vc, cfg, session, expect.get(vc.name, "")) for vc in vcs])
    with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
        futures = [pool.submit(check_vc, vc, cfg, session, expect.get(vc.name, "")) for vc in vcs]
        return ProofResult([f.result() for f in futures])


def _matches(var: str, wanted: list[str]) -> bool:
    if not wanted:
        return True
    for w in wanted:
        if var == w:
            return True
        stem, dot, idx = var.rpartition(".")
        if dot and idx.isdigit() and stem == w:
            return True
    return False


def cex_lines(cex: CexTrace, wanted: list[str] | None = None) -> list[str]:
    lines = []
    for i, state in cex.steps:
        for var, value in state.items():
            if _matches(var, list(wanted or [])):
                lines.append(f"step {i}: {var} = {format_value(value, cex.sorts.get(var))}")
    return lines
