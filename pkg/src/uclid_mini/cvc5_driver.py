"""Command-line front for the cvc5 Python bindings.

Reads SMT-LIB (default) or SyGuS (``--sygus``) commands from a file or
standard input and prints the solver's responses, one command at a time, so
it can be driven interactively like a solver binary.
"""

from __future__ import annotations

import argparse
import sys

import cvc5

from .smt.sexp import balanced_chunks


def _chunks(path: str | None):
    if path:
        with open(path) as fh:
            yield from balanced_chunks(fh)
    else:
        yield from balanced_chunks(iter(sys.stdin.readline, ""))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="cvc5-driver")
    ap.add_argument("file", nargs="?")
    ap.add_argument("--sygus", action="store_true", help="read SyGuS-IF instead of SMT-LIB")
    ap.add_argument("--tlimit", type=int, default=0, help="per-query time limit in milliseconds")
    args = ap.parse_args(argv)

    tm = cvc5.TermManager()
    solver = cvc5.Solver(tm)
    solver.setOption("produce-models", "true")
    if args.sygus:
        solver.setOption("sygus", "true")
    if args.tlimit:
        solver.setOption("tlimit-per", str(args.tlimit))
    lang = cvc5.InputLanguage.SYGUS_2_1 if args.sygus else cvc5.InputLanguage.SMT_LIB_2_6
    sm = cvc5.SymbolManager(tm)
    parser = cvc5.InputParser(solver, sm)
    name = args.file or "<stdin>"
    for chunk in _chunks(args.file):
        # a fresh string input per command; declarations live in the symbol manager
        parser.setStringInput(lang, chunk, name)
        while True:
            try:
                cmd = parser.nextCommand()
            except RuntimeError as exc:
                print(f'(error "{_clean(exc)}")', flush=True)
                return 1
            if cmd.isNull():
                break
            if cmd.getCommandName() == "exit":
                return 0
            try:
                out = cmd.invoke(solver, sm)
            except RuntimeError as exc:
                out = f'(error "{_clean(exc)}")\n'
            if out:
                sys.stdout.write(out if out.endswith("\n") else out + "\n")
                sys.stdout.flush()
    return 0


def _clean(exc: Exception) -> str:
    return str(exc).replace('"', "'").replace("\n", " ")


if __name__ == "__main__":
    sys.exit(main())
