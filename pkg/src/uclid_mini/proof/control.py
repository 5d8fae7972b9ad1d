"""Running a module's control block."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import TextIO

from .. import synth
from ..elaboration import TypedModule
from ..frontend.ast import PROOF_COMMANDS
from ..smt import OracleSession, SolverConfig, bindings_for
from ..smt.smto import DEFAULT_BUDGET, OracleInvocationError
from ..smt.solver import default_sygus_solver
from ..terms import to_smt
from ..vc import VerificationCondition
from .engine import command_vcs
from .results import UNKNOWN, CheckConfig, ProofResult, VcResult, cex_lines, check_all


@dataclass
class RunConfig:
    solver: SolverConfig = field(default_factory=SolverConfig)
    sygus: SolverConfig = field(default_factory=lambda: SolverConfig(default_sygus_solver()))
    smto_budget: int = DEFAULT_BUDGET
    symo_budget: int = synth.DEFAULT_SYMO_BUDGET
    print_cex: bool = False  # print a trace after every FAIL line
    dump_trace: bool = False
    jobs: int = 4
    out: TextIO | None = None

    @property
    def check(self) -> CheckConfig:
        return CheckConfig(self.solver, self.smto_budget, self.jobs)


@dataclass
class Report:
    result: ProofResult
    synthesis: list = field(default_factory=list)  # SynthResult per synthesizing check
    lines: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return self.result.exit_code


class _Runner:
    def __init__(self, m: TypedModule, config: RunConfig):
        self.m = m
        self.cfg = config
        self.out = config.out or sys.stdout
        self.report = Report(ProofResult())
        self.pending: list[tuple[VerificationCondition, str]] = []
        self.printed = 0
        self.session: OracleSession | None = None
        self.oracle_error = ""
        try:
            self.session = OracleSession(bindings_for(m))
        except OracleInvocationError as exc:
            self.oracle_error = str(exc)

    def emit(self, line: str):
        self.report.lines.append(line)
        print(line, file=self.out, flush=True)

    def run(self) -> Report:
        for cmd in self.m.control:
            if cmd.name in PROOF_COMMANDS:
                expect = str(cmd.args[0]) if cmd.name == "check_sat" and cmd.args else ""
                self.pending += [(vc, expect) for vc in command_vcs(self.m, cmd)]
            elif cmd.name == "check":
                self.check()
            elif cmd.name == "print_results":
                self.flush()
            elif cmd.name == "print_cex":
                self.print_cex([str(a) for a in cmd.args])
            # synthesize: checks route through synthesis whenever synthesis functions exist
        if self.pending:
            self.check()
        self.flush()
        return self.report

    def check(self):
        if not self.pending:
            return
        vcs = [vc for vc, _ in self.pending]
        expect = {vc.name: e for vc, e in self.pending if e}
        self.pending = []
        if self.oracle_error:
            results = [VcResult(vc, UNKNOWN, reason=self.oracle_error, expect=expect.get(vc.name, ""))
                       for vc in vcs]
        elif self.m.synth_funs:
            results = self.synthesize(vcs, expect)
        else:
            results = check_all(vcs, self.cfg.check, self.session, expect).results
        self.report.result.results.extend(results)

    def synthesize(self, vcs, expect) -> list[VcResult]:
        problem = synth.build_synthesis_query(vcs, self.m.synth_funs, self.m, self.m.oracle_funs)
        scfg = synth.SynthConfig(self.cfg.sygus, self.cfg.check, self.cfg.symo_budget)
        sr = synth.symo_loop(problem, scfg, self.session)
        self.report.synthesis.append(sr)
        if sr.status == synth.SUCCESS:
            for c in sr.candidates.values():
                self.emit(f"SYNTHESIZED {c.definition()}")
            results = sr.proof.results
            for r in results:
                r.expect = expect.get(r.name, "")
            return results
        reason = f"synthesis {sr.status.lower()}: {sr.reason}" if sr.reason else f"synthesis {sr.status.lower()}"
        return [VcResult(vc, UNKNOWN, reason=reason, expect=expect.get(vc.name, "")) for vc in vcs]

    def flush(self):
        for r in self.report.result.results[self.printed:]:
            self.emit(r.line())
            if self.cfg.print_cex and r.cex is not None and (r.failed or r.verdict == "OBSERVABLE"):
                for line in cex_lines(r.cex):
                    self.emit("  " + line)
            if self.cfg.dump_trace:
                for i, env in enumerate(r.vc.envs):
                    for var, term in env.items():
                        self.emit(f"  sym {i}: {var} = {to_smt(term)}")
        self.printed = len(self.report.result.results)

    def print_cex(self, wanted: list[str]):
        self.flush()
        for r in self.report.result.results:
            if r.cex is not None and (r.failed or r.verdict == "OBSERVABLE"):
                self.emit(f"trace {r.name}:")
                for line in cex_lines(r.cex, wanted):
                    self.emit("  " + line)


def run_control(m: TypedModule, config: RunConfig | None = None) -> Report:
    """Execute the control block of an elaborated module and print its report."""
    return _Runner(m, config or RunConfig()).run()
