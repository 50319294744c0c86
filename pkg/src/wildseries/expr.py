"""Series expressions.

    expr   := ['-'] term (('+'|'-') term)* ['+' 'O' '(' 'z' '^' uint ')']
    term   := factor (('*'|'/') factor)*
    factor := base ('^' uint)?
    base   := int | 'z' | 't' | 'x' | '(' expr ')'

``t`` is the uniformizer of a Laurent field and ``x`` the generator of an
extension field.  Division is allowed by anything with an invertible constant
term.  A trailing ``O(z^N)`` marks the series as known modulo z^N only.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .coeffring import ExtensionField, Field, LaurentField
from .errors import ParseError, WildSeriesError
from .series import PowerSeries, mul_inverse

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "name" | "op" | "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1) is not None:
            out.append(Token("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(Token("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            out.append(Token("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, field: Field, prec: int):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.field = field
        self.prec = prec

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", t.pos)
        return self.take()

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def at_big_o(self) -> bool:
        t = self.tok
        if t.kind == "end":
            return False
        nxt = self.toks[self.i + 1]
        return t.kind == "op" and t.text == "+" and nxt.kind == "name" and nxt.text == "O"

    # grammar ---------------------------------------------------------------
    def parse(self) -> PowerSeries:
        if self.tok.kind == "end":
            raise ParseError("empty expression", 0)
        value = self.expr(top=True)
        if self.at_big_o():
            self.take()
            value = self.big_o(value)
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return value

    def big_o(self, value: PowerSeries) -> PowerSeries:
        self.expect("name", "O")
        self.expect("op", "(")
        self.expect("name", "z")
        self.expect("op", "^")
        n_tok = self.expect("int")
        self.expect("op", ")")
        n = int(n_tok.text)
        if n < 2:
            raise ParseError("O(z^N) needs N >= 2", n_tok.pos)
        prec = min(n - 1, value.prec)
        trunc = value.truncate(prec) if value.prec >= prec else value
        return PowerSeries._raw(trunc.field, trunc.coeffs, trunc.prec, False)

    def expr(self, top: bool = False) -> PowerSeries:
        neg = False
        if self.at_op("-"):
            self.take()
            neg = True
        value = self.term()
        if neg:
            value = -value
        while self.at_op("+", "-"):
            if top and self.at_big_o():
                break
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> PowerSeries:
        value = self.factor()
        while self.at_op("*", "/"):
            op = self.take()
            rhs = self.factor()
            if op.text == "*":
                value = value * rhs
            else:
                try:
                    value = value * mul_inverse(rhs)
                except WildSeriesError as exc:
                    raise ParseError(f"cannot divide: {exc}", op.pos) from exc
        return value

    def factor(self) -> PowerSeries:
        value = self.base()
        if self.at_op("^"):
            self.take()
            e = self.expect("int")
            value = value ** int(e.text)
        return value

    def base(self) -> PowerSeries:
        F, W = self.field, self.prec
        t = self.tok
        if t.kind == "int":
            self.take()
            return PowerSeries.constant(F, F.from_int(int(t.text)), W)
        if t.kind == "name":
            self.take()
            if t.text == "z":
                return PowerSeries.identity(F, W)
            if t.text == "t":
                if not isinstance(F, LaurentField):
                    raise ParseError("'t' needs a laurent field descriptor", t.pos)
                return PowerSeries.constant(F, F.t(), W)
            if t.text == "x":
                if not isinstance(F, ExtensionField):
                    raise ParseError("'x' needs an extension field descriptor", t.pos)
                return PowerSeries.constant(F, F.gen(), W)
            raise ParseError(f"unknown name {t.text!r}", t.pos)
        if t.kind == "op" and t.text == "(":
            self.take()
            value = self.expr()
            self.expect("op", ")")
            return value
        got = t.text or "end of input"
        raise ParseError(f"unexpected {got!r}", t.pos)


def parse_series(text: str, field: Field, prec: int) -> PowerSeries:
    """Evaluate a series expression over ``field`` modulo z^(prec+1)."""
    if prec < 1:
        raise ParseError("precision must be >= 1")
    return _Parser(text, field, prec).parse()
