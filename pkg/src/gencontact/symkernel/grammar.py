"""Parser for the expression grammar used in structure files.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' INT)?
    atom   := INT | IDENT | '(' expr ')'

Rational literals ``p/q`` are just integer division.
"""
from __future__ import annotations

import re

from .ring import Chart, RationalExpr


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: "
        elif column is not None:
            where = f"column {column}: "
        super().__init__(where + message)


class UndeclaredCoordinate(ExprSyntaxError):
    pass


_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()])")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", column=pos + 1)
        col = pos + 1
        if m.group(1):
            tokens.append(("int", int(m.group(1)), col))
        elif m.group(2):
            tokens.append(("ident", m.group(2), col))
        else:
            if m.group(3) == "**":
                raise ExprSyntaxError("use '^' for powers", column=col)
            tokens.append(("op", m.group(3), col))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.tokens = _tokenize(text)
        self.i = 0
        self.chart = chart

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, col = self.take()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}", column=col)

    def parse(self) -> RationalExpr:
        value = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {val!r}", column=col)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            kind, val, col = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.factor()
                if val == "*":
                    value = value * rhs
                else:
                    value = value / rhs
            else:
                return value

    def factor(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.factor()
            return -inner if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, e, col = self.take()
            if k != "int":
                raise ExprSyntaxError("exponent must be a nonnegative integer", column=col)
            return base**e
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "int":
            return self.chart.const(val)
        if kind == "ident":
            if val not in self.chart.coords:
                raise UndeclaredCoordinate(f"undeclared coordinate {val!r}", column=col)
            return self.chart.coord(val)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        if kind == "end":
            raise ExprSyntaxError("unexpected end of expression", column=col)
        raise ExprSyntaxError(f"unexpected token {val!r}", column=col)


def parse_expr(text: str, chart: Chart) -> RationalExpr:
    """Parse ``text`` into a canonical expression on ``chart``.

    Raises ExprSyntaxError, UndeclaredCoordinate, or ZeroDenominator.
    """
    return _Parser(text, chart).parse()
