from . import ast
from .lexer import Token, tokenize
from .parser import parse, parse_expr, parse_file
from .printer import pretty_print, pretty_print_all

__all__ = ["ast", "Token", "tokenize", "parse", "parse_expr", "parse_file",
           "pretty_print", "pretty_print_all"]
