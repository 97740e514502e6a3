"""Parser for the textual expression grammar.

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('-' | '+') unary | power
    power    := atom ('^' exponent)?
    exponent := '-'? INTEGER | '(' expr ')'        (must be an integer constant)
    atom     := NUMBER | NUMBER 'i' | 'i' | 't' | z<r>_<i> | zb<r>_<i>
              | 'exp' '(' expr ')' | '(' expr ')'

An omitted level means 0 (``z_1`` is ``z0_1``). Numbers are decimal and
are read exactly (``0.1`` is 1/10); rationals are written as quotients.
Output of :func:`hamlift.symcore.to_text` parses back to the same value.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, UnknownVariable
from .symcore import I, CRational, Expr, T, const, exp, var, z, zb

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)

_ZVAR = re.compile(r"(zb|z)(\d*)_(\d+)$")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ParseError(f"unexpected character {text[pos]!r}", pos,
                             ("number", "variable", "operator"))
        if mt.lastgroup != "ws":
            if mt.group("number") is not None:
                kind = "imag" if mt.group("imag") else "number"
                out.append((kind, mt.group("number"), pos))
            elif mt.group("ident") is not None:
                out.append(("ident", mt.group("ident"), pos))
            else:
                out.append(("op", mt.group("op"), pos))
        pos = mt.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, chart):
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
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"unexpected {value or 'end of input'!r}", pos, (repr(op),))

    def at_op(self, *ops):
        kind, value, _ = self.peek()
        return kind == "op" and value in ops

    def expr(self):
        out = self.term()
        while self.at_op("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.at_op("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            out = out * rhs if op == "*" else out / rhs
        return out

    def unary(self):
        if self.at_op("-"):
            self.take()
            return -self.unary()
        if self.at_op("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.at_op("^"):
            self.take()
            return base ** self.exponent()
        return base

    def exponent(self):
        kind, value, pos = self.peek()
        negative = False
        if kind == "op" and value == "-":
            self.take()
            negative = True
            kind, value, pos = self.peek()
        if kind == "number":
            self.take()
            q = Fraction(value)
        elif kind == "op" and value == "(":
            self.take()
            e = self.expr()
            self.expect_op(")")
            if not e.is_constant or not e.constant_value.is_real():
                raise ParseError("exponent must be an integer constant", pos, ("integer",))
            q = e.constant_value.re
        else:
            raise ParseError(f"unexpected {value or 'end of input'!r}", pos, ("integer", "'('"))
        if q.denominator != 1:
            raise ParseError("exponent must be an integer", pos, ("integer",))
        return -int(q) if negative else int(q)

    def atom(self) -> Expr:
        kind, value, pos = self.take()
        if kind == "number":
            return const(Fraction(value))
        if kind == "imag":
            return const(CRational(Fraction(0), Fraction(value)))
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        if kind == "ident":
            if value == "i":
                return I
            if value == "t":
                return var(T)
            if value == "exp":
                self.expect_op("(")
                e = self.expr()
                self.expect_op(")")
                return exp(e)
            mt = _ZVAR.match(value)
            if not mt:
                raise UnknownVariable(value, pos)
            level = int(mt.group(2) or 0)
            index = int(mt.group(3))
            if index < 1:
                raise UnknownVariable(value, pos)
            c = (zb if mt.group(1) == "zb" else z)(level, index)
            if self.chart is not None and c not in self.chart:
                raise UnknownVariable(value, pos)
            return var(c)
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos,
                         ("number", "variable", "'('", "'-'", "exp"))


def parse_expression(text: str, chart=None) -> Expr:
    """Parse ``text``; with a chart, variables outside it raise UnknownVariable."""
    p = _Parser(text, chart)
    out = p.expr()
    kind, value, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {value!r}", pos, ("operator", "end of input"))
    return out


def parse_coord(name: str, chart=None):
    name = name.strip()
    if name == "t":
        return T
    mt = _ZVAR.match(name)
    if not mt or int(mt.group(3)) < 1:
        raise UnknownVariable(name)
    c = (zb if mt.group(1) == "zb" else z)(int(mt.group(2) or 0), int(mt.group(3)))
    if chart is not None and c not in chart:
        raise UnknownVariable(name)
    return c


def parse_bindings(text: str, chart=None) -> dict:
    """``"z0_1=1+0i, zb0_1=1-0i"`` -> {Coord: Expr}."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise ParseError(f"binding {item!r} lacks '='", text.find(item), ("'='",))
        name, rhs = item.split("=", 1)
        out[parse_coord(name, chart)] = parse_expression(rhs, chart)
    return out
