"""External solver processes: one process per check-sat."""

from __future__ import annotations

import itertools
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path

from ..terms import Sort, sorts_used
from .emit import emit_query, vc_assertions
from .model import ModelParseError, SmtModel, parse_model


class SolverSpawnError(Exception):
    pass


class SolverProtocolError(Exception):
    pass


def default_solver() -> str:
    if shutil.which("z3"):
        return "z3 -in"
    return f"{shlex.quote(sys.executable)} -m uclid_mini.cvc5_driver"


def default_sygus_solver() -> str:
    return f"{shlex.quote(sys.executable)} -m uclid_mini.cvc5_driver --sygus"


@dataclass
class SolverConfig:
    """How to run a solver.

    ``command`` is a shell-style template. If it contains ``{file}`` the
    script is written to a file and passed by path, otherwise it is fed on
    standard input and the model is requested only after ``sat``.
    ``{timeout}`` is replaced by the timeout in whole seconds.
    """

    command: str = ""
    timeout: float = 30.0
    emit_dir: str | None = None

    def argv(self, file: str | None = None) -> list[str]:
        cmd = self.command or default_solver()
        return [a.replace("{file}", file or "").replace("{timeout}", str(max(1, int(self.timeout))))
                for a in shlex.split(cmd)]

    @property
    def uses_file(self) -> bool:
        return "{file}" in (self.command or default_solver())


@dataclass
class SolveResult:
    status: str  # sat | unsat | unknown
    model: SmtModel | None = None
    reason: str = ""
    output: str = ""

    @property
    def sat(self) -> bool:
        return self.status == "sat"

    @property
    def unsat(self) -> bool:
        return self.status == "unsat"


_VERDICTS = ("sat", "unsat", "unknown")


def _named_sorts(script_terms) -> dict[str, Sort]:
    return {s.name: s for s in sorts_used(script_terms) if s.kind in ("Enum", "Uninterp")}


def write_emitted(cfg: SolverConfig, name: str, text: str, suffix: str = ".smt2") -> Path | None:
    if not cfg.emit_dir:
        return None
    d = Path(cfg.emit_dir)
    d.mkdir(parents=True, exist_ok=True)
    stem = name.replace("/", "_")
    for n in itertools.count(1):
        # never overwrite: later queries with the same name get -2, -3, ...
        path = d / (stem + (f"-{n}" if n > 1 else "") + suffix)
        try:
            with open(path, "x") as fh:
                fh.write(text)
            return path
        except FileExistsError:
            continue


def run_script(script: str, cfg: SolverConfig, sorts: dict[str, Sort] | None = None) -> SolveResult:
    """Run a check-sat script; never raises for solver trouble."""
    try:
        if cfg.uses_file:
            return _run_file(script, cfg, sorts or {})
        return _run_pipe(script, cfg, sorts or {})
    except SolverSpawnError as exc:
        return SolveResult("unknown", reason=f"spawn failed: {exc}")
    except SolverProtocolError as exc:
        return SolveResult("unknown", reason=f"protocol error: {exc}")


def _verdict(lines: list[str]) -> tuple[str, int]:
    for i, line in enumerate(lines):
        s = line.strip()
        if not s:
            continue
        if s in _VERDICTS:
            return s, i
        if s.startswith("(error"):
            raise SolverProtocolError(s)
        raise SolverProtocolError(f"unexpected output {s!r}")
    raise SolverProtocolError("no verdict")


def _model(text: str, sorts) -> SmtModel:
    try:
        return parse_model(text, sorts)
    except ModelParseError as exc:
        raise SolverProtocolError(f"model: {exc}") from None


def _run_file(script: str, cfg: SolverConfig, sorts) -> SolveResult:
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "query.smt2")
        Path(path).write_text(script + "(get-model)\n")
        try:
            proc = subprocess.run(cfg.argv(path), capture_output=True, text=True, timeout=cfg.timeout)
        except FileNotFoundError as exc:
            raise SolverSpawnError(str(exc)) from None
        except subprocess.TimeoutExpired:
            return SolveResult("unknown", reason="timeout")
    lines = proc.stdout.splitlines()
    status, i = _verdict(lines)
    if status != "sat":
        return SolveResult(status, reason="solver returned unknown" if status == "unknown" else "",
                           output=proc.stdout)
    return SolveResult("sat", _model("\n".join(lines[i + 1:]), sorts), output=proc.stdout)


def _run_pipe(script: str, cfg: SolverConfig, sorts) -> SolveResult:
    try:
        proc = subprocess.Popen(cfg.argv(), stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                                stderr=subprocess.DEVNULL, text=True)
    except (FileNotFoundError, PermissionError) as exc:
        raise SolverSpawnError(str(exc)) from None
    timed_out = threading.Event()

    def kill():
        timed_out.set()
        proc.kill()

    timer = threading.Timer(cfg.timeout, kill)
    timer.start()
    try:
        try:
            proc.stdin.write(script)
            proc.stdin.flush()
        except BrokenPipeError:
            raise SolverProtocolError("solver closed its input") from None
        seen = []
        while True:
            line = proc.stdout.readline()
            if not line:
                if timed_out.is_set():
                    return SolveResult("unknown", reason="timeout")
                raise SolverProtocolError("no verdict" + (f" after {seen[-1].strip()!r}" if seen else ""))
            seen.append(line)
            if line.strip():
                break
        status, _ = _verdict([line])
        tail = "(get-model)\n(exit)\n" if status == "sat" else "(exit)\n"
        try:
            proc.stdin.write(tail)
            proc.stdin.close()
        except BrokenPipeError:
            pass
        rest = proc.stdout.read()
        proc.wait()
        if timed_out.is_set():
            return SolveResult("unknown", reason="timeout")
        if status != "sat":
            return SolveResult(status, reason="solver returned unknown" if status == "unknown" else "",
                               output=line + rest)
        return SolveResult("sat", _model(rest, sorts), output=line + rest)
    finally:
        timer.cancel()
        if proc.poll() is None:
            proc.kill()
            proc.wait()


def solve_terms(assertions, cfg: SolverConfig, name: str = "query") -> SolveResult:
    assertions = list(assertions)
    script = emit_query(assertions, name)
    write_emitted(cfg, name, script)
    return run_script(script, cfg, _named_sorts(assertions))


def solve(vc, cfg: SolverConfig, extra=()) -> SolveResult:
    """Check ``vc``: ``unsat`` means the goal follows from the assumptions."""
    return solve_terms(vc_assertions(vc, extra), cfg, vc.name)
