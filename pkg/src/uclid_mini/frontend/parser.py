"""Recursive-descent parser producing span-annotated ASTs."""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from ..diagnostics import Diagnostic, FrontendError, Span, cover
from . import ast as A
from .lexer import Token, normalize, tokenize

_BV_TYPE = re.compile(r"^bv([0-9]+)$")
MAX_BV_WIDTH = 64

# binary operator tiers, lowest precedence first; ==> handled separately
_TIERS = [
    ("<==>",),
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("++",),
    ("+", "-"),
    ("*", "/", "div", "mod"),
]


class Parser:
    def __init__(self, text: str, path: str = "<input>"):
        self.text = normalize(text)
        self.path = path
        self.tokens = tokenize(self.text, path)
        self.pos = 0
        self.prev: Token = self.tokens[0]

    # -- token plumbing ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "keyword") and t.text in texts

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        self.prev = t
        return t

    def error(self, expected: tuple[str, ...], message: str | None = None):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        if message is None:
            message = f"unexpected {found}"
        raise FrontendError(Diagnostic("ParseError", message, t.span, tuple(expected)))

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error((repr(text),), f"expected {text!r}, found {self._found()}")
        return self.advance()

    def _found(self) -> str:
        return "end of input" if self.tok.kind == "eof" else repr(self.tok.text)

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            self.error((what,), f"expected {what}, found {self._found()}")
        return self.advance().text

    def qualified_ident(self, what: str = "identifier") -> str:
        name = self.ident(what)
        while self.at(".") and self.peek().kind == "ident":
            self.advance()
            name += "." + self.advance().text
        return name

    def integer(self) -> int:
        neg = self.accept("-")
        if self.tok.kind != "int":
            self.error(("integer literal",), f"expected integer literal, found {self._found()}")
        v = int(self.advance().text)
        return -v if neg else v

    def span_from(self, start: Token) -> Span:
        return cover(start.span, self.prev.span)

    # -- modules -----------------------------------------------------------

    def parse_program(self) -> list[A.Module]:
        modules = []
        while self.tok.kind != "eof":
            if not self.at("module"):
                self.error(("'module'",))
            modules.append(self.parse_module())
        return modules

    def parse_module(self) -> A.Module:
        start = self.expect("module")
        name = self.ident("module name")
        self.expect("{")
        decls = []
        control = None
        seen_blocks = set()
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error(("'}'",))
            if self.at("control"):
                if control is not None:
                    self.error(("'}'",), "duplicate control block")
                control = self.parse_control()
                continue
            if self.at("init", "next"):
                if self.tok.text in seen_blocks:
                    self.error(("declaration",), f"duplicate {self.tok.text} block")
                seen_blocks.add(self.tok.text)
            decls.append(self.parse_decl())
        self.expect("}")
        return A.Module(name, tuple(decls), control, span=self.span_from(start))

    def parse_decl(self) -> A.Decl:
        t = self.tok
        if t.kind != "keyword":
            self.error(("declaration",), f"expected declaration, found {self._found()}")
        handler = {
            "type": self.parse_type_decl,
            "var": self.parse_var_decl,
            "input": self.parse_var_decl,
            "output": self.parse_var_decl,
            "const": self.parse_var_decl,
            "function": self.parse_function_decl,
            "define": self.parse_define_decl,
            "synthesis": self.parse_synth_decl,
            "oracle": self.parse_oracle_decl,
            "procedure": self.parse_procedure,
            "init": self.parse_init,
            "next": self.parse_next,
            "instance": self.parse_instance,
            "invariant": self.parse_invariant,
            "hyperinvariant": self.parse_hyper,
            "axiom": self.parse_axiom,
            "hyperaxiom": self.parse_hyper,
            "group": self.parse_group,
        }.get(t.text)
        if handler is None:
            self.error(("declaration",), f"expected declaration, found {self._found()}")
        return handler()

    def parse_type_decl(self) -> A.TypeDecl:
        start = self.expect("type")
        name = self.ident("type name")
        ty = None
        if self.accept("="):
            ty = self.parse_type(allow_enum=True)
        self.expect(";")
        return A.TypeDecl(name, ty, span=self.span_from(start))

    def parse_var_decl(self) -> A.VarDecl:
        start = self.advance()
        names = [self.qualified_ident("variable name")]
        while self.accept(","):
            names.append(self.qualified_ident("variable name"))
        self.expect(":")
        ty = self.parse_type()
        self.expect(";")
        return A.VarDecl(start.text, tuple(names), ty, span=self.span_from(start))

    def parse_params(self) -> A.Params:
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                pname = self.ident("parameter name")
                self.expect(":")
                params.append((pname, self.parse_type()))
                if not self.accept(","):
                    break
        self.expect(")")
        return tuple(params)

    def parse_function_decl(self) -> A.FunctionDecl:
        start = self.expect("function")
        name = self.ident("function name")
        params = self.parse_params()
        self.expect(":")
        ret = self.parse_type()
        self.expect(";")
        return A.FunctionDecl(name, params, ret, span=self.span_from(start))

    def parse_define_decl(self) -> A.DefineDecl:
        start = self.expect("define")
        name = self.qualified_ident("function name")
        params = self.parse_params()
        self.expect(":")
        ret = self.parse_type()
        self.expect("=")
        body = self.parse_expr()
        self.expect(";")
        return A.DefineDecl(name, params, ret, body, span=self.span_from(start))

    def parse_synth_decl(self) -> A.SynthFunDecl:
        start = self.expect("synthesis")
        self.expect("function")
        name = self.ident("function name")
        params = self.parse_params()
        self.expect(":")
        ret = self.parse_type()
        grammar = []
        if self.accept("grammar"):
            self.expect("{")
            while not self.at("}"):
                nt_start = self.tok
                nt = self.ident("nonterminal name")
                self.expect(":")
                nt_type = self.parse_type()
                self.expect("=")
                self.expect("{")
                prods = [self.parse_expr()]
                while self.accept(","):
                    prods.append(self.parse_expr())
                self.expect("}")
                self.expect(";")
                grammar.append(A.Nonterminal(nt, nt_type, tuple(prods), span=self.span_from(nt_start)))
            self.expect("}")
            if not grammar:
                self.error(("nonterminal",), "empty grammar")
        self.expect(";")
        return A.SynthFunDecl(name, params, ret, tuple(grammar), span=self.span_from(start))

    def parse_oracle_decl(self) -> A.OracleFunDecl:
        start = self.expect("oracle")
        self.expect("function")
        open_tok = self.expect("[")
        if self.tok.kind == "string":
            binary = self.advance().text[1:-1]
        else:
            first = self.tok
            while not self.at("]"):
                if self.tok.kind == "eof":
                    self.error(("']'",))
                self.advance()
            if self.tok is first:
                self.error(("oracle binary path",), "empty oracle binary path")
            binary = self.text[open_tok.span.offset + 1:self.tok.span.offset].strip()
        self.expect("]")
        name = self.ident("function name")
        params = self.parse_params()
        self.expect(":")
        ret = self.parse_type()
        self.expect(";")
        return A.OracleFunDecl(name, params, ret, binary, span=self.span_from(start))

    def parse_procedure(self) -> A.ProcedureDecl:
        start = self.expect("procedure")
        name = self.qualified_ident("procedure name")
        params = self.parse_params()
        returns: A.Params = ()
        if self.accept("returns"):
            returns = self.parse_params()
        requires, ensures, modifies = [], [], []
        while self.at("requires", "ensures", "modifies"):
            kw = self.advance().text
            if kw == "modifies":
                modifies.append(self.qualified_ident())
                while self.accept(","):
                    modifies.append(self.qualified_ident())
            else:
                (requires if kw == "requires" else ensures).append(self.parse_expr())
            self.expect(";")
        body = None
        if self.at("{"):
            body = self.parse_block()
        else:
            self.expect(";")
        return A.ProcedureDecl(name, params, returns, tuple(requires), tuple(ensures),
                               tuple(modifies), body, span=self.span_from(start))

    def parse_init(self) -> A.InitBlock:
        start = self.expect("init")
        body = self.parse_block()
        return A.InitBlock(body, span=self.span_from(start))

    def parse_next(self) -> A.NextBlock:
        start = self.expect("next")
        body = self.parse_block()
        return A.NextBlock(body, span=self.span_from(start))

    def parse_instance(self) -> A.InstanceDecl:
        start = self.expect("instance")
        name = self.ident("instance name")
        self.expect(":")
        module = self.ident("module name")
        self.expect("(")
        bindings = []
        if not self.at(")"):
            while True:
                port = self.ident("port name")
                self.expect(":")
                bindings.append((port, self.parse_expr()))
                if not self.accept(","):
                    break
        self.expect(")")
        self.expect(";")
        return A.InstanceDecl(name, module, tuple(bindings), span=self.span_from(start))

    def _label(self) -> str:
        """Optional `name :` prefix (name may be dotted)."""
        k = 0
        if self.peek(k).kind != "ident":
            return ""
        while self.peek(k + 1).text == "." and self.peek(k + 2).kind == "ident":
            k += 2
        nxt = self.peek(k + 1)
        if nxt.kind == "punct" and nxt.text == ":":
            name = self.qualified_ident()
            self.advance()
            return name
        return ""

    def parse_invariant(self) -> A.Invariant:
        start = self.expect("invariant")
        name = self.qualified_ident("invariant name")
        self.expect(":")
        expr = self.parse_expr()
        self.expect(";")
        return A.Invariant(name, expr, span=self.span_from(start))

    def parse_axiom(self) -> A.Axiom:
        start = self.expect("axiom")
        name = self._label() or f"axiom_L{start.span.line}"
        expr = self.parse_expr()
        self.expect(";")
        return A.Axiom(name, expr, span=self.span_from(start))

    def parse_hyper(self):
        start = self.advance()
        self.expect("[")
        arity_tok = self.tok
        arity = self.integer()
        if arity < 1:
            raise FrontendError(Diagnostic("ParseError", "hyper arity must be >= 1", arity_tok.span))
        self.expect("]")
        name = self.qualified_ident("specification name")
        self.expect(":")
        expr = self.parse_expr()
        self.expect(";")
        cls = A.HyperInvariant if start.text == "hyperinvariant" else A.HyperAxiom
        return cls(arity, name, expr, span=self.span_from(start))

    def parse_group(self) -> A.GroupDecl:
        start = self.expect("group")
        name = self.ident("group name")
        self.expect(":")
        ty = self.parse_type()
        self.expect("=")
        self.expect("{")
        elems = []
        if not self.at("}"):
            elems.append(self.parse_expr())
            while self.accept(","):
                elems.append(self.parse_expr())
        self.expect("}")
        self.expect(";")
        return A.GroupDecl(name, ty, tuple(elems), span=self.span_from(start))

    def parse_control(self) -> A.ControlBlock:
        start = self.expect("control")
        self.expect("{")
        commands = []
        seen_proof = False
        while not self.at("}"):
            cstart = self.tok
            if cstart.kind != "ident" or cstart.text not in A.COMMANDS:
                self.error(A.COMMANDS, f"unknown control command {self._found()}")
            name = self.advance().text
            args: list = []
            if self.accept("("):
                if not self.at(")"):
                    while True:
                        if self.tok.kind == "int" or self.at("-"):
                            args.append(self.integer())
                        else:
                            args.append(self.qualified_ident())
                        if not self.accept(","):
                            break
                self.expect(")")
            if name == "check_sat" and self.tok.kind == "ident" and self.tok.text == "expect":
                self.advance()
                mode = self.ident("'observable' or 'unobservable'")
                if mode not in ("observable", "unobservable"):
                    raise FrontendError(Diagnostic("ParseError", f"unknown expectation {mode!r}",
                                                   self.prev.span, ("observable", "unobservable")))
                args.append(mode)
            self.expect(";")
            cmd = A.Command(name, tuple(args), span=self.span_from(cstart))
            self._check_command(cmd)
            if name in A.PROOF_COMMANDS:
                seen_proof = True
            if name == "check" and not seen_proof:
                raise FrontendError(Diagnostic("ParseError", "check must follow a proof command", cmd.span))
            commands.append(cmd)
        self.expect("}")
        return A.ControlBlock(tuple(commands), span=self.span_from(start))

    def _check_command(self, cmd: A.Command):
        def bad(msg):
            raise FrontendError(Diagnostic("ParseError", msg, cmd.span))

        n, args = cmd.name, cmd.args
        if n == "bmc" or n == "kinduction":
            if len(args) != 1 or not isinstance(args[0], int) or args[0] < (0 if n == "bmc" else 1):
                bad(f"{n} takes one non-negative bound")
        elif n == "induction":
            if len(args) > 1 or (args and (not isinstance(args[0], int) or args[0] < 1)):
                bad("induction takes an optional bound >= 1")
        elif n == "verify":
            if len(args) != 1 or not isinstance(args[0], str):
                bad("verify takes one procedure name")
        elif n == "print_cex":
            if any(not isinstance(a, str) for a in args):
                bad("print_cex takes variable names")
        elif n != "check_sat" and args:
            bad(f"{n} takes no arguments")

    # -- types -------------------------------------------------------------

    def parse_type(self, allow_enum: bool = False) -> A.Type:
        start = self.tok
        if self.accept("["):
            index = self.parse_type()
            self.expect("]")
            elem = self.parse_type()
            return A.ArrayType(index, elem, span=self.span_from(start))
        if allow_enum and self.accept("enum"):
            self.expect("{")
            members = [self.ident("enum member")]
            while self.accept(","):
                members.append(self.ident("enum member"))
            self.expect("}")
            return A.EnumType(tuple(members), span=self.span_from(start))
        if start.kind != "ident":
            self.error(("type",), f"expected type, found {self._found()}")
        self.advance()
        m = _BV_TYPE.match(start.text)
        if m:
            width = int(m.group(1))
            if not 1 <= width <= MAX_BV_WIDTH:
                raise FrontendError(Diagnostic("ParseError", f"bitvector width {width} out of range 1..{MAX_BV_WIDTH}", start.span))
            return A.BVType(width, span=start.span)
        return A.TypeName(start.text, span=start.span)

    # -- statements --------------------------------------------------------

    def parse_block(self) -> tuple[A.Stmt, ...]:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error(("'}'",))
            stmts.extend(self.parse_stmt())
        self.expect("}")
        return tuple(stmts)

    def parse_stmt(self) -> list[A.Stmt]:
        start = self.tok
        if self.accept("var"):
            names = [self.ident("variable name")]
            while self.accept(","):
                names.append(self.ident("variable name"))
            self.expect(":")
            ty = self.parse_type()
            self.expect(";")
            sp = self.span_from(start)
            return [A.LocalVar(n, ty, span=sp) for n in names]
        if self.accept("havoc"):
            name = self.qualified_ident()
            self.expect(";")
            return [A.Havoc(name, span=self.span_from(start))]
        if self.accept("assert"):
            label = self._label()
            e = self.parse_expr()
            self.expect(";")
            return [A.Assert(e, label, span=self.span_from(start))]
        if self.accept("assume"):
            e = self.parse_expr()
            self.expect(";")
            return [A.Assume(e, span=self.span_from(start))]
        if self.at("if"):
            return [self.parse_if()]
        if self.accept("case"):
            arms = []
            while not self.at("esac"):
                if self.tok.kind == "eof":
                    self.error(("'esac'",))
                g = self.parse_expr()
                self.expect(":")
                arms.append((g, self.parse_block()))
            self.expect("esac")
            return [A.Case(tuple(arms), span=self.span_from(start))]
        if self.accept("for"):
            var = self.ident("loop variable")
            self.expect("in")
            lo = self.parse_expr()
            self.expect("..")
            hi = self.parse_expr()
            body = self.parse_block()
            return [A.For(var, lo, hi, body, span=self.span_from(start))]
        if self.accept("while"):
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            invs = []
            while self.accept("invariant"):
                label = self._label()
                invs.append((label, self.parse_expr()))
                self.expect(";")
            body = self.parse_block()
            return [A.While(cond, tuple(invs), body, span=self.span_from(start))]
        if self.accept("call"):
            lhs = []
            if self.accept("("):
                if not self.at(")"):
                    lhs.append(self.qualified_ident())
                    while self.accept(","):
                        lhs.append(self.qualified_ident())
                self.expect(")")
                self.expect("=")
            proc = self.qualified_ident("procedure name")
            args = self.parse_args()
            self.expect(";")
            return [A.Call(tuple(lhs), proc, args, span=self.span_from(start))]
        if self.accept("next"):
            self.expect("(")
            inst = self.ident("instance name")
            self.expect(")")
            self.expect(";")
            return [A.NextInst(inst, span=self.span_from(start))]
        if start.kind == "ident":
            name = self.qualified_ident()
            primed = self.accept("'")
            index = None
            if not primed and self.accept("["):
                index = self.parse_expr()
                self.expect("]")
            if not self.at("="):
                self.error(("'='",), f"expected '=', found {self._found()}")
            self.advance()
            value = self.parse_expr()
            self.expect(";")
            sp = self.span_from(start)
            if index is not None:
                value = A.Store(A.Ident(name, span=start.span), index, value, span=sp)
            return [A.Assign(name, primed, value, span=sp)]
        self.error(("statement",), f"expected statement, found {self._found()}")

    def parse_if(self) -> A.If:
        start = self.expect("if")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        then = self.parse_block()
        els: tuple = ()
        if self.accept("else"):
            if self.at("if"):
                els = (self.parse_if(),)
            else:
                els = self.parse_block()
        return A.If(cond, then, els, span=self.span_from(start))

    def parse_args(self) -> tuple[A.Expr, ...]:
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.parse_expr())
            while self.accept(","):
                args.append(self.parse_expr())
        self.expect(")")
        return tuple(args)

    # -- expressions -------------------------------------------------------

    def parse_expr(self) -> A.Expr:
        start = self.tok
        lhs = self.parse_tier(0)
        if self.accept("==>"):
            rhs = self.parse_expr()
            return A.Binary("==>", lhs, rhs, span=self.span_from(start))
        return lhs

    def parse_tier(self, level: int) -> A.Expr:
        if level == len(_TIERS):
            return self.parse_unary()
        start = self.tok
        lhs = self.parse_tier(level + 1)
        while self.at(*_TIERS[level]):
            op = self.advance().text
            rhs = self.parse_tier(level + 1)
            lhs = A.Binary(op, lhs, rhs, span=self.span_from(start))
        return lhs

    def parse_unary(self) -> A.Expr:
        start = self.tok
        if self.at("!", "-", "~"):
            op = self.advance().text
            arg = self.parse_unary()
            return A.Unary(op, arg, span=self.span_from(start))
        return self.parse_postfix()

    def parse_postfix(self) -> A.Expr:
        start = self.tok
        e = self.parse_primary()
        while self.at("["):
            self.advance()
            first = self.parse_expr()
            if self.accept(":"):
                if not isinstance(first, A.IntLit):
                    raise FrontendError(Diagnostic("ParseError", "extract bounds must be integer literals", first.span))
                hi_tok = self.tok
                lo = self.integer()
                self.expect("]")
                if lo < 0 or first.value < lo:
                    raise FrontendError(Diagnostic("ParseError", "bad extract bounds", hi_tok.span))
                e = A.Extract(e, first.value, lo, span=self.span_from(start))
            elif self.accept("->"):
                value = self.parse_expr()
                self.expect("]")
                e = A.Store(e, first, value, span=self.span_from(start))
            else:
                self.expect("]")
                e = A.Select(e, first, span=self.span_from(start))
        return e

    def parse_primary(self) -> A.Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return A.IntLit(int(t.text), span=t.span)
        if t.kind == "real":
            self.advance()
            return A.RealLit(Fraction(t.text), span=t.span)
        if t.kind == "bvlit":
            self.advance()
            value, width = t.text.split("bv")
            w = int(width)
            if not 1 <= w <= MAX_BV_WIDTH:
                raise FrontendError(Diagnostic("ParseError", f"bitvector width {w} out of range 1..{MAX_BV_WIDTH}", t.span))
            v = int(value)
            if v >= 1 << w:
                raise FrontendError(Diagnostic("ParseError", f"literal {v} does not fit in {w} bits", t.span))
            return A.BVLit(v, w, span=t.span)
        if self.at("true", "false"):
            self.advance()
            return A.BoolLit(t.text == "true", span=t.span)
        if self.accept("("):
            e = self.parse_expr()
            self.expect(")")
            return e
        if self.accept("if"):
            cond = self.parse_expr()
            self.expect("then")
            then = self.parse_expr()
            self.expect("else")
            els = self.parse_expr()
            return A.Ite(cond, then, els, span=self.span_from(t))
        if self.accept("old"):
            self.expect("(")
            name = self.qualified_ident()
            self.expect(")")
            return A.Old(name, span=self.span_from(t))
        if self.at("finite_forall", "finite_exists"):
            kind = self.advance().text
            self.expect("(")
            var = self.ident("bound variable")
            self.expect(":")
            ty = self.parse_type()
            self.expect(")")
            self.expect("in")
            group = self.ident("group name")
            self.expect("::")
            body = self.parse_expr()
            return A.FiniteQuant(kind, var, ty, group, body, span=self.span_from(t))
        if self.at("forall", "exists"):
            kind = self.advance().text
            bindings = self.parse_params()
            if not bindings:
                self.error(("bound variable",), "quantifier needs at least one bound variable")
            self.expect("::")
            body = self.parse_expr()
            return A.Quant(kind, bindings, body, span=self.span_from(t))
        if t.kind == "ident":
            name = self.ident()
            while self.at(".") and self.peek().kind in ("ident", "int"):
                self.advance()
                part = self.advance()
                if part.kind == "int":
                    return A.TraceIdent(name, int(part.text), span=self.span_from(t))
                name += "." + part.text
            if self.at("("):
                args = self.parse_args()
                return A.Apply(name, args, span=self.span_from(t))
            if self.accept("'"):
                return A.Primed(name, span=self.span_from(t))
            return A.Ident(name, span=self.span_from(t))
        self.error(("expression",), f"expected expression, found {self._found()}")


def parse(text: str, path: str = "<input>") -> list[A.Module]:
    """Parse source text into modules; raises FrontendError on failure."""
    return Parser(text, path).parse_program()


def parse_file(path) -> list[A.Module]:
    p = Path(path)
    return parse(p.read_text(encoding="utf-8"), str(p))


def parse_expr(text: str, path: str = "<expr>") -> A.Expr:
    p = Parser(text, path)
    e = p.parse_expr()
    if p.tok.kind != "eof":
        p.error(("end of input",))
    return e
