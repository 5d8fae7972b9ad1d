"""Command-line entry point."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass

from .diagnostics import UclidError
from .elaboration import elaborate, emit_elaborated
from .frontend import parse_file
from .proof import RunConfig, run_control
from .smt import SolverConfig
from .smt.smto import DEFAULT_BUDGET
from .smt.solver import default_sygus_solver
from .synth import DEFAULT_SYMO_BUDGET

EXIT_USAGE = 3
log = logging.getLogger("uclid_mini")


@dataclass
class CliConfig:
    files: list[str]
    solver: str = ""
    sygus_solver: str = ""
    timeout: float = 30.0
    emit_dir: str | None = None
    verbose: int = 0
    print_cex: bool = False
    dump_trace: bool = False
    emit_elaborated: str | None = None
    smto_budget: int = DEFAULT_BUDGET
    symo_budget: int = DEFAULT_SYMO_BUDGET
    jobs: int = 4
    main: str | None = None

    def run_config(self) -> RunConfig:
        return RunConfig(
            solver=SolverConfig(self.solver, self.timeout, self.emit_dir),
            sygus=SolverConfig(self.sygus_solver or default_sygus_solver(), self.timeout, self.emit_dir),
            smto_budget=self.smto_budget, symo_budget=self.symo_budget, print_cex=self.print_cex,
            dump_trace=self.dump_trace, jobs=self.jobs)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="uclid-mini", description="Verify and synthesize uclid-mini models.")
    ap.add_argument("files", nargs="+", metavar="FILE", help="model files (modules share one namespace)")
    ap.add_argument("--solver", default="", help="SMT solver command; {file} and {timeout} are substituted "
                                                 "(default: $UCLID_MINI_SOLVER, else 'z3 -in')")
    ap.add_argument("--sygus-solver", default="", help="SyGuS solver command (default: bundled cvc5 driver)")
    ap.add_argument("--timeout", type=_positive_float, default=30.0, help="per-query timeout in seconds")
    ap.add_argument("--emit-dir", help="write every .smt2/.sl script sent to a solver into this directory")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    ap.add_argument("--print-cex", action="store_true", help="print a trace after every FAIL")
    ap.add_argument("--dump-trace", action="store_true", help="print the symbolic state of every condition")
    ap.add_argument("--emit-elaborated", metavar="PATH", help="write the lowered module as source text")
    ap.add_argument("--smto-budget", type=_positive_int, default=DEFAULT_BUDGET)
    ap.add_argument("--symo-budget", type=_positive_int, default=DEFAULT_SYMO_BUDGET)
    ap.add_argument("--jobs", type=_positive_int, default=4, help="conditions checked in parallel")
    ap.add_argument("--main", help="module to verify (default: main, or the only module)")
    return ap


def parse_args(argv=None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(ns.files, ns.solver or os.environ.get("UCLID_MINI_SOLVER", ""), ns.sygus_solver,
                     ns.timeout, ns.emit_dir, ns.verbose, ns.print_cex, ns.dump_trace, ns.emit_elaborated,
                     ns.smto_budget, ns.symo_budget, ns.jobs, ns.main)


def run(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbose, 2), stream=sys.stderr,
                        format="%(levelname)s: %(message)s")
    try:
        modules = []
        for f in cfg.files:
            modules += parse_file(f)
        m = elaborate(modules, cfg.main)
    except UclidError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"uclid-mini: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.emit_elaborated:
        with open(cfg.emit_elaborated, "w") as fh:
            fh.write(emit_elaborated(m))
    log.info("verifying module %s (%d variables)", m.name, len(m.variables))
    report = run_control(m, cfg.run_config())
    return report.exit_code


def main() -> None:
    sys.exit(run())
