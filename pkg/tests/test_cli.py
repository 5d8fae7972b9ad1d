import os
import subprocess
import sys

import pytest

from uclid_mini.cli import parse_args, run
from uclid_mini.frontend import parse_file

from conftest import CORPUS, CORPUS_FILES, needs_z3


def cli(capsys, *args):
    code = run([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


@needs_z3
def test_counter_passes(capsys):
    code, out, _ = cli(capsys, CORPUS / "counter.ucl")
    assert code == 0
    assert any(l.startswith("PASS x_nonneg@step ") for l in out.splitlines())


@needs_z3
def test_print_cex_shows_initial_state(capsys):
    code, out, _ = cli(capsys, "--print-cex", CORPUS / "fib-noaux.ucl")
    assert code == 1
    lines = out.splitlines()
    i = next(i for i, l in enumerate(lines) if l.startswith("FAIL a_le_b@step"))
    assert lines[i + 1].startswith("  step 0: a = -")


def test_no_files_is_usage_error(capsys):
    code, _, err = cli(capsys)
    assert code == 3 and "usage" in err


def test_bad_flag_value(capsys):
    assert cli(capsys, "--jobs", "0", CORPUS / "counter.ucl")[0] == 3


def test_parse_error_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.ucl"
    bad.write_text("module main { var x : integer }\n")
    code, _, err = cli(capsys, bad)
    assert code == 3
    assert str(bad) in err and ":1:" in err


def test_missing_file(capsys):
    assert cli(capsys, "/nonexistent/model.ucl")[0] == 3


def test_missing_solver_exit_2(capsys):
    code, out, _ = cli(capsys, "--solver", "/nonexistent/z3 -in", CORPUS / "counter.ucl")
    assert code == 2 and all(l.startswith("UNKNOWN ") for l in out.splitlines())


def test_solver_env_fallback(monkeypatch):
    monkeypatch.setenv("UCLID_MINI_SOLVER", "mysolver --in")
    assert parse_args(["a.ucl"]).solver == "mysolver --in"
    assert parse_args(["--solver", "z3 -in", "a.ucl"]).solver == "z3 -in"


def test_timeout_is_unknown(capsys):
    code, out, _ = cli(capsys, "--solver", "sleep 20", "--timeout", "1", "--jobs", "8", CORPUS / "counter.ucl")
    assert code == 2
    assert "UNKNOWN x_nonneg@step" in out and "timeout" in out


@needs_z3
def test_emit_dir_writes_scripts(tmp_path, capsys):
    cli(capsys, "--emit-dir", tmp_path, CORPUS / "counter.ucl")
    cli(capsys, "--emit-dir", tmp_path, CORPUS / "fib.ucl")
    assert list(tmp_path.glob("*.smt2")) and list(tmp_path.glob("*.sl"))


@needs_z3
def test_emit_elaborated_reparses(tmp_path, capsys):
    dest = tmp_path / "flat.ucl"
    cli(capsys, "--emit-elaborated", dest, CORPUS / "counters.ucl")
    (mod,) = parse_file(dest)
    assert mod.name == "main"


@needs_z3
def test_dump_trace(capsys):
    _, out, _ = cli(capsys, "--dump-trace", CORPUS / "counter.ucl")
    assert "  sym 0: x = " in out


@needs_z3
def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "uclid_mini", str(CORPUS / "swap.ucl")], capture_output=True,
                          text=True, timeout=60)
    assert proc.returncode == 0 and "PASS" in proc.stdout


EXPECTED_EXIT = {"fib-noaux.ucl": 1, "det-relaxed.ucl": 1, "infeasible.ucl": 2}


@needs_z3
@pytest.mark.parametrize("name", CORPUS_FILES)
def test_corpus_exit_codes(name, capsys):
    code, out, _ = cli(capsys, CORPUS / name)
    assert code == EXPECTED_EXIT.get(name, 0), out


@pytest.mark.parametrize("name", CORPUS_FILES)
def test_exit_code_matches_verdicts_without_solver(name, capsys):
    code, out, _ = cli(capsys, "--solver", "/nonexistent/solver", "--sygus-solver", "/nonexistent/sygus",
                       CORPUS / name)
    verdicts = {l.split()[0] for l in out.splitlines() if not l.startswith(" ")}
    assert verdicts <= {"UNKNOWN", "SYNTHESIZED"}
    assert code == (2 if "UNKNOWN" in verdicts else 0)
