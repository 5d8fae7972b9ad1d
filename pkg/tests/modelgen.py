"""Random deterministic models for differential testing.

Models use integers, booleans and 8-bit vectors, one integer input, and
if/else (one- or two-sided) in next. Division only ever divides by a non-zero literal, and there
is no havoc and no body-free call, so a model is deterministic once its
inputs are fixed.
"""

import random

from uclid_mini.symexec import concrete_interpret, unroll
from uclid_mini.terms import evaluate

from conftest import load_text

INT_VARS = ["x", "y"]
BOOL_VARS = ["p"]
BV_VARS = ["w"]


def _int(r: random.Random, depth: int) -> str:
    if depth <= 0 or r.random() < 0.3:
        return r.choice(INT_VARS + ["i", str(r.randint(-5, 5))])
    k = r.randrange(6)
    a, b = _int(r, depth - 1), _int(r, depth - 1)
    if k == 0:
        return f"({a} + {b})"
    if k == 1:
        return f"({a} - {b})"
    if k == 2:
        return f"({a} * {r.randint(-3, 3)})"
    if k == 3:
        return f"({a} div {r.choice([-3, -2, 2, 3, 7])})"
    if k == 4:
        return f"({a} mod {r.choice([2, 3, 5])})"
    return f"(if {_bool(r, depth - 1)} then {a} else {b})"


def _bool(r: random.Random, depth: int) -> str:
    if depth <= 0 or r.random() < 0.3:
        return r.choice(BOOL_VARS + ["true", "false"])
    k = r.randrange(5)
    if k == 0:
        return f"({_int(r, depth - 1)} < {_int(r, depth - 1)})"
    if k == 1:
        return f"({_int(r, depth - 1)} == {_int(r, depth - 1)})"
    if k == 2:
        return f"({_bool(r, depth - 1)} && {_bool(r, depth - 1)})"
    if k == 3:
        return f"!{_bool(r, depth - 1)}"
    return f"({_bv(r, depth - 1)} < {_bv(r, depth - 1)})"


def _bv(r: random.Random, depth: int) -> str:
    if depth <= 0 or r.random() < 0.3:
        return r.choice(BV_VARS + [f"{r.randrange(256)}bv8"])
    op = r.choice(["+", "-", "*", "&", "|", "^"])
    return f"({_bv(r, depth - 1)} {op} {_bv(r, depth - 1)})"


def _assign(r: random.Random, var: str, depth: int) -> str:
    if var in INT_VARS:
        return f"{var}' = {_int(r, depth)};"
    if var in BOOL_VARS:
        return f"{var}' = {_bool(r, depth)};"
    return f"{var}' = {_bv(r, depth)};"


def random_model(seed: int) -> str:
    r = random.Random(seed)
    depth = r.randint(1, 3)
    variables = INT_VARS + BOOL_VARS + BV_VARS
    body = []
    for v in r.sample(variables, r.randint(1, len(variables))):
        if r.random() < 0.2:
            # one-sided assignment: the other branch keeps the old value
            body.append(f"if ({_bool(r, 1)}) {{ {_assign(r, v, depth)} }}")
        elif r.random() < 0.3:
            body.append(f"if ({_bool(r, 1)}) {{ {_assign(r, v, depth)} }} "
                        f"else {{ {_assign(r, v, depth)} }}")
        else:
            body.append(_assign(r, v, depth))
    init = [f"x = {r.randint(-3, 3)};", f"y = {r.randint(-3, 3)};", f"p = {r.choice(['true', 'false'])};",
            f"w = {r.randrange(256)}bv8;"]
    return ("module main {\n  var x, y : integer;\n  var p : boolean;\n  var w : bv8;\n  input i : integer;\n"
            f"  init {{ {' '.join(init)} }}\n  next {{ {' '.join(body)} }}\n}}\n")


def random_inputs(seed: int, k: int) -> list[dict]:
    r = random.Random(seed * 7919 + 1)
    return [{"i": r.randint(-10, 10)} for _ in range(k + 1)]


def differential_mismatches(seed: int, k: int = 10) -> list[tuple]:
    """(step, var, symbolic value, concrete value) wherever the two evaluations differ."""
    m = load_text(random_model(seed))
    inputs = random_inputs(seed, k)
    concrete = concrete_interpret(m, inputs, k)
    env = {f"i@{j}": inputs[j]["i"] for j in range(k + 1)}
    out = []
    for j, s in enumerate(unroll(m, k)):
        for var, term in s.env.items():
            sym = evaluate(term, env)
            if sym != concrete.states[j][var]:
                out.append((j, var, sym, concrete.states[j][var]))
    return out
