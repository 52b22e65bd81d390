"""Text grammar for :class:`~tpq.expr.core.Expr`.

::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ['-'] base ('^' ['-'] integer)?
    base   := number | 'i' | 'pi' | ident | ident '(' args ')'
            | 'exp' '(' expr ')' | 'D' '[' ident (',' ident)+ ']' | '(' expr ')'

``f(x1, x2)`` is accepted for an opaque symbol when the argument list names
exactly its declared dependencies; it denotes the symbol itself.
``D[f, x1, x2]`` is the jet of ``f`` differentiated once in ``x1`` and once
in ``x2``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .core import PI, ChartSignature, Expr, ExprError, I, exp

__all__ = ["parse_expr", "ParseError"]


class ParseError(ExprError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),\[\]]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos, text)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, sig: ChartSignature):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, value: str):
        t = self.take()
        if t[1] != value or t[0] == "end":
            self.fail(f"expected {value!r}", t)
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return e

    def expr(self) -> Expr:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        out = self.term()
        if sign < 0:
            out = -out
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> Expr:
        out = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()
            f = self.factor()
            if op[1] == "*":
                out = out * f
            else:
                if not f.is_monomial():
                    self.fail("division by a non-monomial expression", op)
                out = out / f
        return out

    def factor(self) -> Expr:
        neg = False
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            neg = True
        b = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sgn = 1
            if self.peek()[1] in ("-", "+") and self.peek()[0] == "op":
                sgn = -1 if self.take()[1] == "-" else 1
            t = self.take()
            if t[0] != "num" or not t[1].isdigit():
                self.fail("exponent must be an integer", t)
            k = sgn * int(t[1])
            if k < 0 and not b.is_monomial():
                self.fail("negative power of a non-monomial expression", t)
            b = b ** k
        return -b if neg else b

    def base(self) -> Expr:
        t = self.take()
        kind, val, pos = t
        sig = self.sig
        if kind == "num":
            return Expr.rational(Fraction(val), 0, sig)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind != "id":
            self.fail("expected an operand", t)
        if val == "i":
            return I * Expr.one(sig)
        if val == "pi":
            return PI * Expr.one(sig)
        if val == "exp":
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            try:
                return exp(arg)
            except ExprError as err:
                raise ParseError(str(err), pos, self.text) from None
        if val == "D":
            self.expect("[")
            name = self.ident()
            wrt = []
            while self.peek()[1] == ",":
                self.take()
                wrt.append(self.ident())
            self.expect("]")
            if not wrt:
                self.fail("D[...] needs at least one coordinate", t)
            if not sig.has_symbol(name[1]):
                self.fail(f"undeclared identifier {name[1]!r}", name)
            for w in wrt:
                if not sig.has_coordinate(w[1]):
                    self.fail(f"unknown coordinate {w[1]!r}", w)
            return sig.jet(name[1], *(w[1] for w in wrt))
        if sig.has_coordinate(val):
            return sig.coord(val)
        if sig.has_symbol(val):
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                self.take()
                args = []
                if self.peek()[1] != ")":
                    args.append(self.ident())
                    while self.peek()[1] == ",":
                        self.take()
                        args.append(self.ident())
                self.expect(")")
                deps = set(sig.symbol(val).depends)
                if {a[1] for a in args} != deps or len(args) != len(deps):
                    self.fail(f"arguments of {val!r} must be exactly its dependencies {sorted(deps)}", t)
            return sig.fn(val)
        self.fail(f"undeclared identifier {val!r}", t)

    def ident(self):
        t = self.take()
        if t[0] != "id":
            self.fail("expected an identifier", t)
        return t


def parse_expr(text: str, sig: ChartSignature) -> Expr:
    """Parse ``text`` into canonical form over ``sig``."""
    if not isinstance(text, str):
        raise TypeError("expression text must be a string")
    return _Parser(text, sig).parse()
