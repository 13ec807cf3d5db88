"""Tiny arithmetic expression grammar for embeddings and normal scalings.

Supported: ``+ - * / ^<integer>``, parentheses, ``exp``, ``sin``,
``cos``, numeric literals and declared variable names.  Expressions
compile to closures over a coordinate list, dual-compatible, so
everything built from them can be differentiated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Sequence

from . import dual
from .errors import ExprParseError

_FUNCTIONS = {"exp": dual.exp, "sin": dual.sin, "cos": dual.cos}


@dataclass(frozen=True)
class Expr:
    text: str
    variables: tuple
    fn: Callable

    def __call__(self, coords):
        return self.fn(coords)


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.pos = 0
        self.vars = {name: i for i, name in enumerate(variables)}

    def error(self, msg: str):
        raise ExprParseError(f"{msg} in {self.text!r}", self.pos)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self):
        node = self.expr()
        if self.peek():
            self.error(f"unexpected trailing input {self.text[self.pos:]!r}")
        return node

    def expr(self):
        node = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                rhs = self.term()
                node = (lambda a, b: lambda c: a(c) + b(c))(node, rhs)
            elif ch == "-":
                self.pos += 1
                rhs = self.term()
                node = (lambda a, b: lambda c: a(c) - b(c))(node, rhs)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                rhs = self.unary()
                node = (lambda a, b: lambda c: a(c) * b(c))(node, rhs)
            elif ch == "/":
                self.pos += 1
                rhs = self.unary()
                node = (lambda a, b: lambda c: a(c) / b(c))(node, rhs)
            else:
                return node

    def unary(self):
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            inner = self.unary()
            return lambda c: -inner(c)
        if ch == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            sign = 1
            if self.peek() == "-":
                sign = -1
                self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start or (self.pos < len(self.text) and self.text[self.pos] == "."):
                self.error("exponent must be an integer literal")
            n = sign * int(self.text[start:self.pos])
            return (lambda b, k: lambda c: dual._ipow(b(c), k))(base, n)
        return base

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            node = self.expr()
            if self.peek() != ")":
                self.error("missing closing parenthesis")
            self.pos += 1
            return node
        if ch.isdigit() or ch == ".":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
                self.pos += 1
            try:
                value = float(self.text[start:self.pos])
            except ValueError:
                self.error(f"bad numeric literal {self.text[start:self.pos]!r}")
            return lambda c, v=value: v
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name in _FUNCTIONS:
                if self.peek() != "(":
                    self.error(f"function {name} needs parentheses")
                self.pos += 1
                arg = self.expr()
                if self.peek() != ")":
                    self.error(f"missing closing parenthesis after {name}(...)")
                self.pos += 1
                f = _FUNCTIONS[name]
                return lambda c, f=f, a=arg: f(a(c))
            if name in self.vars:
                idx = self.vars[name]
                return lambda c, i=idx: c[i]
            self.pos = start
            self.error(f"unknown identifier {name!r}")
        if ch == "":
            self.error("unexpected end of expression")
        self.error(f"unexpected character {ch!r}")


def compile_expression(text: str, variables: Sequence[str]) -> Expr:
    fn = _Parser(text, variables).parse()
    return Expr(text=text.strip(), variables=tuple(variables), fn=fn)


def compile_map(texts: Sequence[str], variables: Sequence[str]) -> Callable:
    """Compile a list of expressions into a coordinate-map closure."""
    exprs: List[Expr] = [compile_expression(t, variables) for t in texts]

    def map_func(coords):
        return [e(coords) for e in exprs]

    return map_func
