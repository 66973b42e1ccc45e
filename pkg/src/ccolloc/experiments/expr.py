"""A small expression language for scalar right-hand sides f(t, y).

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?
    unary  := '-'? atom
    atom   := number | 't' | 'y' | ident '(' expr ')' | '(' expr ')'

'^' is right-associative. Unary minus attaches to the atom, so ``-y^2``
reads as ``(-y)^2``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

__all__ = ["ExprSyntaxError", "Num", "Var", "Neg", "BinOp", "Call", "parse_rhs", "FUNCTIONS"]

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}

_OPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "^": lambda a, b: a**b,
}


class ExprSyntaxError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Num:
    value: float

    def eval(self, t, y):
        return self.value

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def eval(self, t, y):
        return t if self.name == "t" else y

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg:
    operand: "Node"

    def eval(self, t, y):
        return -self.operand.eval(t, y)

    def __str__(self):
        return f"(-{self.operand})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"

    def eval(self, t, y):
        return _OPS[self.op](self.left.eval(t, y), self.right.eval(t, y))

    def __str__(self):
        return f"({self.left}{self.op}{self.right})"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"

    def eval(self, t, y):
        return FUNCTIONS[self.func](self.arg.eval(t, y))

    def __str__(self):
        return f"{self.func}({self.arg})"


Node = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value, what):
        kind, text, pos = self.tok
        if text != value or kind == "end":
            found = "end of input" if kind == "end" else repr(text)
            raise ExprSyntaxError(f"expected {what}, found {found}", pos)
        self.take()

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        base = self.unary()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.take()
            return BinOp("^", base, self.factor())
        return base

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] == "-":
            self.take()
            return Neg(self.atom())
        return self.atom()

    def atom(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.take()
            return Num(float(text))
        if kind == "ident":
            self.take()
            if text in ("t", "y"):
                return Var(text)
            if text not in FUNCTIONS:
                raise ExprSyntaxError(f"unknown function {text!r}", pos)
            self.expect("(", f"'(' after {text}")
            arg = self.expr()
            self.expect(")", "')'")
            return Call(text, arg)
        if kind == "op" and text == "(":
            self.take()
            node = self.expr()
            self.expect(")", "')'")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExprSyntaxError(f"expected a number, t, y, function call or '(', found {found}", pos)


def parse_rhs(text: str) -> Node:
    """Parse `text` into an expression tree over the variables t and y."""
    parser = _Parser(text)
    node = parser.expr()
    kind, tok, pos = parser.tok
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {tok!r} after complete expression", pos)
    return node
