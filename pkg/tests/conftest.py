import shutil
from pathlib import Path

import pytest

from uclid_mini.elaboration import elaborate
from uclid_mini.frontend import parse, parse_file
from uclid_mini.proof import CheckConfig
from uclid_mini.smt import SolverConfig

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
CORPUS_FILES = sorted(p.name for p in CORPUS.glob("*.ucl"))

needs_z3 = pytest.mark.skipif(shutil.which("z3") is None, reason="z3 binary not on PATH")


def load(name: str):
    """Elaborated corpus module."""
    return elaborate(parse_file(CORPUS / name))


def load_text(text: str, path: str = "<test>"):
    return elaborate(parse(text, path))


def check_cfg(jobs: int = 4, timeout: float = 30.0) -> CheckConfig:
    return CheckConfig(SolverConfig(timeout=timeout), jobs=jobs)


@pytest.fixture
def cfg():
    return check_cfg()
