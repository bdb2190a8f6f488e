"""A deliberately small arithmetic language for Hamiltonians.

Grammar (``^`` is right associative and binds tighter than unary minus)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Names are the variables ``x, y, z, s`` and the functions ``sin, cos, exp``.
The parse tree is turned into a sympy expression, which supplies exact
partial derivatives and a numpy evaluator.  Nothing is passed to ``eval``.
"""

from __future__ import annotations

import re

import sympy

from .errors import ContractViolation

VARIABLES = ("x", "y", "z", "s")
FUNCTIONS = {"sin": sympy.sin, "cos": sympy.cos, "exp": sympy.exp}

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?|\d+(?:[eE][-+]?\d+)?)|([A-Za-z_]\w*)|(.))")


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        number, name, op = m.groups()
        if number is not None:
            tokens.append(("num", number))
        elif name is not None:
            tokens.append(("name", name))
        elif op in "+-*/^()":
            tokens.append(("op", op))
        else:
            raise ContractViolation(f"unexpected character {op!r} in expression")
        pos = m.end()
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0
        self.symbols = {v: sympy.Symbol(v, real=True) for v in VARIABLES}

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ContractViolation(f"expected {value or kind}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        self.take("end")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term(self):
        node = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            node = node * rhs if op == "*" else node / rhs
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            return base ** self.unary()
        return base

    def atom(self):
        kind, value = self.peek()
        if kind == "num":
            self.take()
            return sympy.Float(value) if any(c in value for c in ".eE") else sympy.Integer(value)
        if kind == "name":
            self.take()
            if value in FUNCTIONS:
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                return FUNCTIONS[value](arg)
            if value in self.symbols:
                return self.symbols[value]
            raise ContractViolation(f"unknown name {value!r}; allowed: {VARIABLES + tuple(FUNCTIONS)}")
        if (kind, value) == ("op", "("):
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise ContractViolation(f"unexpected token {value or 'end of input'!r}")


def parse_expression(text: str) -> sympy.Expr:
    """Parse ``text`` into a sympy expression over the real symbols x, y, z, s."""
    if not text or not text.strip():
        raise ContractViolation("empty expression")
    return _Parser(text).parse()
