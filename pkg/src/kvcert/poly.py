"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import UnknownVariable, VariableMismatch

Exponent = tuple[int, ...]


def _grlex_key(exp: Exponent):
    return (sum(exp), exp)


class MultiPoly:
    """Immutable polynomial over ``variables``.

    ``terms`` maps exponent vectors (one entry per variable) to nonzero
    :class:`~fractions.Fraction` coefficients.
    """

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, object] = ()):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exp, c in dict(terms).items():
            exp = tuple(exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for variables {self.variables}")
            c = Fraction(c)
            if c:
                clean[exp] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables, terms):
        # terms already canonical: tuple keys, nonzero Fractions
        p = object.__new__(cls)
        p.variables = variables
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, value, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        try:
            i = variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls._raw(variables, {exp: Fraction(1)})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        """Terms in graded-lexicographic order, largest first."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0,) * len(self.variables), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        exp = max(self._terms, key=_grlex_key)
        return exp, self._terms[exp]

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.variables}, {self.items()})"

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.variables != other.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.variables)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        if not c:
            return MultiPoly._raw(self.variables, {})
        return MultiPoly._raw(self.variables, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (eb, cb), = b.items()
            return MultiPoly._raw(
                self.variables,
                {tuple(x + y for x, y in zip(ea, eb)): ca * cb for ea, ca in a.items()},
            )
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                out[exp] = out.get(exp, 0) + ca * cb
        return MultiPoly._raw(self.variables, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def partial(self, var: str) -> "MultiPoly":
        try:
            i = self.variables.index(var)
        except ValueError:
            raise UnknownVariable(var) from None
        out = {}
        for exp, c in self._terms.items():
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                out[tuple(e)] = c * exp[i]
        return MultiPoly._raw(self.variables, out)

    def evaluate(self, values: Mapping[str, object]):
        total = Fraction(0)
        for exp, c in self._terms.items():
            t = c
            for name, e in zip(self.variables, exp):
                if e:
                    t *= Fraction(values[name]) ** e
            total += t
        return total

    # -- factor bookkeeping ----------------------------------------------

    def monomial_content(self) -> Exponent:
        """Componentwise minimum exponent over all terms."""
        if not self._terms:
            return (0,) * len(self.variables)
        exps = iter(self._terms)
        low = list(next(exps))
        for e in exps:
            low = [min(a, b) for a, b in zip(low, e)]
        return tuple(low)

    def shift_down(self, exp: Exponent) -> "MultiPoly":
        return MultiPoly._raw(
            self.variables,
            {tuple(a - b for a, b in zip(e, exp)): c for e, c in self._terms.items()},
        )

    def integer_scale(self) -> Fraction:
        """Positive rational ``s`` making ``s*self`` integral with coprime coefficients."""
        if not self._terms:
            return Fraction(1)
        den = lcm(*(c.denominator for c in self._terms.values()))
        num = gcd(*(c.numerator for c in self._terms.values()))
        return Fraction(den, abs(num))

    def divide_exact(self, divisor: "MultiPoly") -> "MultiPoly | None":
        """Return ``self / divisor`` when the division is exact, else ``None``."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero():
            return self
        if len(divisor) == 1:
            (ed, cd), = divisor._terms.items()
            out = {}
            for e, c in self._terms.items():
                q = tuple(a - b for a, b in zip(e, ed))
                if min(q) < 0:
                    return None
                out[q] = c / cd
            return MultiPoly._raw(self.variables, out)
        if self.degree() < divisor.degree():
            return None
        ed, cd = divisor.leading_term()
        rem = dict(self._terms)
        quot: dict = {}
        dterms = list(divisor._terms.items())
        while rem:
            er = max(rem, key=_grlex_key)
            q = tuple(a - b for a, b in zip(er, ed))
            if min(q) < 0:
                return None
            qc = rem[er] / cd
            quot[q] = qc
            for e, c in dterms:
                exp = tuple(a + b for a, b in zip(e, q))
                v = rem.get(exp, 0) - qc * c
                if v:
                    rem[exp] = v
                else:
                    rem.pop(exp, None)
        return MultiPoly._raw(self.variables, quot)


def poly_from_terms(variables: Sequence[str], terms: Iterable[tuple[object, Exponent]]) -> MultiPoly:
    acc: dict = {}
    for c, exp in terms:
        exp = tuple(exp)
        acc[exp] = acc.get(exp, 0) + Fraction(c)
    return MultiPoly(variables, acc)
