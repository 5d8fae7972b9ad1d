"""Proof commands, verdicts and the control-block runner."""

from .compose import prepare, self_compose
from .engine import bmc, check_sat, command_vcs, control_vcs, induct, verify_procedure
from .results import (FAIL, OBSERVABLE, PASS, UNKNOWN, UNOBSERVABLE, CheckConfig, ProofResult, VcResult, cex_lines,
                      check_all, check_vc)
from .control import Report, RunConfig, run_control  # noqa: E402  (after engine/results: synth imports them)

__all__ = [
    "CheckConfig", "FAIL", "OBSERVABLE", "PASS", "ProofResult", "Report", "RunConfig", "UNKNOWN", "UNOBSERVABLE",
    "VcResult", "bmc", "cex_lines", "check_all", "check_sat", "check_vc", "command_vcs", "control_vcs", "induct",
    "prepare", "run_control", "self_compose", "verify_procedure",
]
