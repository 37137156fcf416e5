"""Coefficient expressions: text <-> RatFunc.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

Exponents are nonnegative integer literals and cannot be chained.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import NegativeExponent, ParseError, UnknownVariable, ZeroDenominatorLiteral
from .poly import MultiPoly
from .ratfunc import RatFunc

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.)", re.S)


@dataclass(frozen=True)
class ExprSource:
    text: str
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        for v in self.variables:
            if not NAME_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        offset = len(text[:pos].encode("utf-8"))
        if pos >= len(text):
            toks.append(_Tok("end", "", offset))
            return toks
        m = _TOKEN_RE.match(text, pos)
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), offset))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), offset))
        elif m.group(3) in "+-*/^()":
            toks.append(_Tok("op", m.group(3), offset))
        else:
            raise ParseError(f"unexpected character {m.group(3)!r}", offset)
        pos = m.end()


class _Parser:
    def __init__(self, src: ExprSource):
        self.vars = src.variables
        self.toks = _tokenize(src.text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text == text

    def parse(self) -> RatFunc:
        value = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.offset)
        return value

    def expr(self) -> RatFunc:
        value = self.term()
        while self.at("+") or self.at("-"):
            op = self.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.unary()
        while self.at("*") or self.at("/"):
            op = self.next()
            rhs_tok = self.peek()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs_tok.kind == "int" and int(rhs_tok.text) == 0 and self.toks[self.i - 1] is rhs_tok:
                    raise ZeroDenominatorLiteral("division by the literal 0", rhs_tok.offset)
                value = value / rhs
        return value

    def unary(self) -> RatFunc:
        if self.at("-"):
            self.next()
            return -self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.at("^"):
            self.next()
            t = self.next()
            if t.kind == "op" and t.text == "-":
                raise NegativeExponent("negative exponent", t.offset)
            if t.kind != "int":
                raise ParseError("exponent must be an integer literal", t.offset)
            base = base ** int(t.text)
            if self.at("^"):
                raise ParseError("chained exponents are not allowed", self.peek().offset)
        return base

    def atom(self) -> RatFunc:
        t = self.next()
        if t.kind == "int":
            return RatFunc.constant(int(t.text), self.vars)
        if t.kind == "name":
            if t.text not in self.vars:
                raise UnknownVariable(t.text)
            return RatFunc.variable(t.text, self.vars)
        if t.kind == "op" and t.text == "(":
            value = self.expr()
            close = self.next()
            if not (close.kind == "op" and close.text == ")"):
                raise ParseError("expected ')'", close.offset)
            return value
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.offset)
        raise ParseError(f"unexpected {t.text!r}", t.offset)


def parse_expr(src: ExprSource | str, variables: Sequence[str] = ()) -> RatFunc:
    """Parse coefficient text into a :class:`RatFunc`.

    Accepts either an :class:`ExprSource` or plain text plus the variable list.
    """
    if isinstance(src, str):
        src = ExprSource(src, tuple(variables))
    return _Parser(src).parse()


# -- printing ---------------------------------------------------------------


def _monomial(variables, exp) -> str:
    parts = []
    for name, e in zip(variables, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _term(coeff: int, mono: str) -> str:
    if not mono:
        return str(coeff)
    if coeff == 1:
        return mono
    if coeff == -1:
        return "-" + mono
    return f"{coeff}*{mono}"


def _poly_text(p: MultiPoly) -> str:
    items = p.items()
    if not items:
        return "0"
    out = []
    for k, (exp, c) in enumerate(items):
        c = int(c)
        mono = _monomial(p.variables, exp)
        if k == 0:
            out.append(_term(c, mono))
        else:
            out.append((" - " if c < 0 else " + ") + _term(abs(c), mono))
    return "".join(out)


def _integral_pair(f: RatFunc) -> tuple[MultiPoly, MultiPoly]:
    num, den = f.num, f.den
    coeffs = list(num.terms.values()) + list(den.terms.values())
    scale = lcm(*(c.denominator for c in coeffs))
    num, den = num.scale(scale), den.scale(scale)
    g = gcd(*(int(c) for c in list(num.terms.values()) + list(den.terms.values())))
    sign = -1 if den.leading_term()[1] < 0 else 1
    return num.scale(Fraction(sign, g)), den.scale(Fraction(sign, g))


def print_expr(f: RatFunc) -> str:
    """Deterministic text for ``f`` that :func:`parse_expr` reads back."""
    if f.is_zero():
        return "0"
    num, den = _integral_pair(f)
    top = _poly_text(num)
    if den == 1:
        return top
    if len(num) > 1:
        top = f"({top})"
    bottom = _poly_text(den)
    single_factor = len(den) == 1 and (
        den.is_constant() or (den.leading_term()[1] == 1 and sum(1 for e in den.leading_term()[0] if e) == 1)
    )
    if not single_factor:
        bottom = f"({bottom})"
    return f"{top}/{bottom}"
