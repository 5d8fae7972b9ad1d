"""Satisfiability modulo oracles: refine oracle functions with point lemmas."""

from __future__ import annotations

import os
import shutil
import subprocess
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..terms import Sort, Term, applications, apply, eq, evaluate, lit, literal_to_smt
from ..values import default_value
from .model import ModelParseError, SmtModel, parse_literal
from .solver import SolverConfig, SolveResult, solve

ORACLE_TIMEOUT = 5.0
DEFAULT_BUDGET = 64


class OracleInvocationError(Exception):
    pass


@dataclass
class OracleBinding:
    name: str
    arg_sorts: tuple[Sort, ...]
    ret: Sort
    binary: str
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def check(self):
        if not (os.path.isfile(self.binary) and os.access(self.binary, os.X_OK)):
            raise OracleInvocationError(f"oracle binary for {self.name} is missing or not executable: {self.binary}")

    def invoke(self, args: tuple, timeout: float = ORACLE_TIMEOUT):
        argv = [self.binary] + [literal_to_smt(a, s) for a, s in zip(args, self.arg_sorts)]
        with self.lock:
            try:
                proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
            except (OSError, subprocess.TimeoutExpired) as exc:
                raise OracleInvocationError(f"{self.name}: {exc}") from None
        if proc.returncode != 0:
            raise OracleInvocationError(f"{self.name} exited with status {proc.returncode}")
        try:
            return parse_literal(proc.stdout, self.ret)
        except (ModelParseError, ValueError) as exc:
            raise OracleInvocationError(f"{self.name} printed {proc.stdout.strip()!r}: {exc}") from None


def resolve_binary(binary: str, model_path: str | None) -> str:
    if os.path.isabs(binary):
        return binary
    if model_path:
        cand = Path(model_path).resolve().parent / binary
        if cand.exists():
            return str(cand)
    found = shutil.which(binary)
    return found or binary


def bindings_for(m) -> dict[str, OracleBinding]:
    """Oracle bindings of a typed module, binaries resolved next to the model file."""
    return {f.name: OracleBinding(f.name, f.arg_sorts, f.ret, resolve_binary(f.binary, m.path))
            for f in m.oracle_funs.values()}


@dataclass
class OracleSession:
    """Oracle bindings plus every answer obtained so far (in call order)."""

    bindings: dict[str, OracleBinding]
    log: list[tuple[str, tuple, object]] = field(default_factory=list)
    table: dict[tuple[str, tuple], object] = field(default_factory=dict)
    timeout: float = ORACLE_TIMEOUT
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        for b in self.bindings.values():
            b.check()

    def query(self, name: str, args: tuple):
        key = (name, args)
        with self.lock:
            if key not in self.table:
                value = self.bindings[name].invoke(args, self.timeout)
                self.table[key] = value
                self.log.append((name, args, value))
            return self.table[key]

    def lemma(self, name: str, args: tuple) -> Term:
        b = self.bindings[name]
        app = apply(name, [lit(a, s) for a, s in zip(args, b.arg_sorts)], b.ret)
        return eq(app, lit(self.table[(name, args)], b.ret))

    def lemmas(self) -> list[Term]:
        return [self.lemma(n, a) for n, a, _ in self.log]


@dataclass
class SmtoResult:
    status: str  # sat | unsat | unknown
    model: SmtModel | None = None
    reason: str = ""
    rounds: int = 0
    lemmas: list[tuple[str, tuple, object]] = field(default_factory=list)

    @property
    def sat(self) -> bool:
        return self.status == "sat"

    @property
    def unsat(self) -> bool:
        return self.status == "unsat"


def oracle_points(terms, model: SmtModel, names: set[str]) -> list[tuple[Term, str, tuple]]:
    """Ground oracle applications in ``terms`` with their argument values under ``model``."""
    consts = model.constants
    out = []
    seen = set()
    for root in terms:
        for app in applications(root, names):
            args = tuple(evaluate(a, consts, model.call, lambda t: default_value(t.sort)) for a in app.args)
            key = (app.value, args)
            if key not in seen:
                seen.add(key)
                out.append((app, app.value, args))
    return out


def smto_check(vc, session: OracleSession, cfg: SolverConfig, budget: int = DEFAULT_BUDGET) -> SmtoResult:
    """Decide ``vc`` with oracle functions pinned point-wise by their binaries.

    Each round solves with the lemmas found so far. On a model, every oracle
    application is evaluated; each new point is sent to its binary and
    recorded as a lemma. If the model already agreed with all of them the
    model is genuine and the result is ``sat``.
    """
    names = set(session.bindings)
    lemmas: list[tuple[str, tuple, object]] = []
    pinned: set = set()
    terms = vc.terms()
    for rounds in range(1, budget + 1):
        r: SolveResult = solve(vc, cfg, [session.lemma(n, a) for n, a, _ in lemmas])
        if not r.sat:
            return SmtoResult(r.status, None, r.reason, rounds, lemmas)
        agree = True
        try:
            points = oracle_points(terms, r.model, names)
            for app, name, args in points:
                if (name, args) in pinned:
                    continue
                value = session.query(name, args)
                pinned.add((name, args))
                lemmas.append((name, args, value))
                if r.model.call(name, args, app.sort) != value:
                    agree = False
        except OracleInvocationError as exc:
            return SmtoResult("unknown", None, f"oracle failure: {exc}", rounds, lemmas)
        if agree:
            return SmtoResult("sat", r.model, "", rounds, lemmas)
    return SmtoResult("unknown", None, "oracle budget", budget, lemmas)
