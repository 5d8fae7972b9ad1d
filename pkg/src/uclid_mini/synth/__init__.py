"""SyGuS query construction, candidate parsing and the synthesis loop."""

from .candidate import CandidateFunction, CandidateParseError, parse_candidate
from .loop import (DEFAULT_SYMO_BUDGET, INFEASIBLE, SUCCESS, UNKNOWN, SubstitutionSortError, SynthConfig, SynthResult,
                   apply_and_reverify, reverify, run_sygus, substitute_candidates, symo_loop)
from .problem import NoSynthFun, SynthesisProblem, build_synthesis_query, emit_sygus, grammar_text

__all__ = [
    "CandidateFunction", "CandidateParseError", "DEFAULT_SYMO_BUDGET", "INFEASIBLE", "NoSynthFun", "SUCCESS",
    "SubstitutionSortError", "SynthConfig", "SynthResult", "SynthesisProblem", "UNKNOWN", "apply_and_reverify",
    "build_synthesis_query", "emit_sygus", "grammar_text", "parse_candidate", "reverify", "run_sygus",
    "substitute_candidates", "symo_loop",
]
