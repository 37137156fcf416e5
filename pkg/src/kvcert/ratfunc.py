"""Rational functions over the rationals.

Representations are not canonical: there is no multivariate gcd.  Every
value is still reduced by rational content, by common monomial factors and,
when cheap, by exact polynomial division.  Equality never depends on the
representation; it is decided by cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DivisionByZero, VariableMismatch
from .poly import MultiPoly


class RatFunc:
    __slots__ = ("num", "den")
    __hash__ = None  # equality is semantic, so no structural hash

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.constant(1, num.variables)
        if num.variables != den.variables:
            raise VariableMismatch(f"{num.variables} vs {den.variables}")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num, den):
        f = object.__new__(cls)
        f.num, f.den = num, den
        return f

    @classmethod
    def constant(cls, value, variables: Sequence[str]) -> "RatFunc":
        value = Fraction(value)
        variables = tuple(variables)
        return cls._raw(MultiPoly.constant(value, variables), MultiPoly.constant(1, variables))

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "RatFunc":
        variables = tuple(variables)
        return cls._raw(MultiPoly.variable(name, variables), MultiPoly.constant(1, variables))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        from .expr import print_expr

        return f"RatFunc({print_expr(self)!r})"

    def __str__(self):
        from .expr import print_expr

        return print_expr(self)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.constant(other, self.variables)
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if b == d:
            return RatFunc(a + c, b)
        if d.is_constant():
            return RatFunc(a + c * (b * (1 / d.constant_value())), b)
        if b.is_constant():
            return RatFunc(a * (d * (1 / b.constant_value())) + c, d)
        q = b.divide_exact(d)
        if q is not None:
            return RatFunc(a + c * q, b)
        q = d.divide_exact(b)
        if q is not None:
            return RatFunc(a * q + c, d)
        return RatFunc(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RatFunc.constant(0, self.variables)
        a, b, c, d = self.num, self.den, other.num, other.den
        # cancel the obvious cross factors before multiplying out
        if not d.is_constant():
            q = a.divide_exact(d)
            if q is not None:
                a, d = q, MultiPoly.constant(1, self.variables)
        if not b.is_constant():
            q = c.divide_exact(b)
            if q is not None:
                c, b = q, MultiPoly.constant(1, self.variables)
        return RatFunc(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZero("inverse of the zero function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("integer exponent required")
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return rf_eq(self, other)

    def partial(self, var: str) -> "RatFunc":
        n, d = self.num, self.den
        if d.is_constant():
            return RatFunc._raw(n.partial(var), d)
        dn, dd = n.partial(var), d.partial(var)
        if dd.is_zero():
            return RatFunc(dn, d)
        return RatFunc(dn * d - n * dd, d * d)

    def evaluate(self, values):
        return self.num.evaluate(values) / self.den.evaluate(values)


def _reduce(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    variables = num.variables
    if num.is_zero():
        return num, MultiPoly.constant(1, variables)
    # common monomial factor
    lo = tuple(min(a, b) for a, b in zip(num.monomial_content(), den.monomial_content()))
    if any(lo):
        num, den = num.shift_down(lo), den.shift_down(lo)
    if not den.is_constant():
        q = num.divide_exact(den)
        if q is not None:
            num, den = q, MultiPoly.constant(1, variables)
    # scalar normalisation: integral, primitive denominator with positive leading coefficient
    s = den.integer_scale()
    if den.leading_term()[1] < 0:
        s = -s
    if s != 1:
        num, den = num.scale(s), den.scale(s)
    return num, den


def rf_eq(a: RatFunc, b: RatFunc) -> bool:
    """Exact equality: ``a.num*b.den - b.num*a.den`` is the zero polynomial."""
    if a.variables != b.variables:
        raise VariableMismatch(f"{a.variables} vs {b.variables}")
    if a.den == b.den:
        return a.num == b.num
    return (a.num * b.den - b.num * a.den).is_zero()


def rf_arith(op: str, a: RatFunc, b: RatFunc | None = None) -> RatFunc:
    if op == "neg":
        return -a
    ops = {
        "add": RatFunc.__add__,
        "sub": RatFunc.__sub__,
        "mul": RatFunc.__mul__,
        "div": RatFunc.__truediv__,
    }
    try:
        fn = ops[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)


def rf_partial(a: RatFunc, var: str) -> RatFunc:
    return a.partial(var)
