"""Verification conditions and counterexample traces shared by the backends."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .terms import Term, guard, symbols


@dataclass
class VerificationCondition:
    """``assumptions => goal`` must be valid; UNSAT of ``assumptions && !goal`` is PASS.

    ``envs`` holds the symbolic value of every variable at each state the
    condition talks about (state 0 first); counterexamples are rebuilt by
    evaluating them in a model. ``observe`` marks satisfiability queries
    where a model is the interesting outcome.
    """

    name: str
    assumptions: list[Term]
    goal: Term
    command: str = ""
    spec: str = ""
    step: int = 0
    arity: int = 1
    envs: list[dict[str, Term]] = field(default_factory=list)
    kind: str = "invariant"
    observe: bool = False
    start: str = "init"  # init | arbitrary | procedure

    def formula(self) -> Term:
        return guard(self.assumptions, self.goal)

    def terms(self) -> list[Term]:
        return list(self.assumptions) + [self.goal]

    @property
    def symbol_map(self) -> dict[str, tuple[str, int, int]]:
        """Symbolic constant name -> (variable, step, trace)."""
        out = {}
        for t in symbols(self.terms() + [v for env in self.envs for v in env.values()]):
            c = t.value
            out[c.name] = (c.var, c.step, c.trace)
        return out

    def with_terms(self, assumptions, goal, envs=None) -> "VerificationCondition":
        return replace(self, assumptions=list(assumptions), goal=goal,
                       envs=self.envs if envs is None else envs)


@dataclass
class CexTrace:
    """Concrete states of a counterexample, state 0 first."""

    steps: list[tuple[int, dict]]
    arity: int = 1
    spec: str = ""
    defaulted: set = field(default_factory=set)  # (step, var) pairs filled with sort defaults
    free: dict = field(default_factory=dict)  # symbolic constant name -> value
    sorts: dict = field(default_factory=dict)  # variable -> Sort

    def state(self, i: int) -> dict:
        return self.steps[i][1]

    def column(self, var: str) -> list:
        return [s[var] for _, s in self.steps]
