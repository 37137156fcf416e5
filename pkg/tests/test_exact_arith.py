from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kvcert.errors import DivisionByZero, UnknownVariable, VariableMismatch
from kvcert.expr import parse_expr
from kvcert.poly import MultiPoly
from kvcert.ratfunc import RatFunc, rf_arith, rf_eq, rf_partial

V = ("x", "y", "z")


def P(text, variables=V):
    return parse_expr(text, variables)


exponents = st.tuples(*(st.integers(0, 3) for _ in V)).filter(lambda e: sum(e) <= 3)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(exponents, coeffs, max_size=4).map(lambda t: MultiPoly(V, t))
nonzero_polys = polys.filter(lambda p: not p.is_zero())
ratfuncs = st.builds(RatFunc, polys, nonzero_polys)
nonzero_ratfuncs = ratfuncs.filter(lambda f: not f.is_zero())

settings.register_profile("kvcert", max_examples=60, deadline=None)
settings.load_profile("kvcert")


# -- polynomials ------------------------------------------------------------------------


def test_polynomial_invariants():
    p = MultiPoly(V, {(1, 0, 0): 2, (0, 1, 0): 0, (0, 0, 0): Fraction(1, 2)})
    assert (0, 1, 0) not in p.terms
    assert p.degree() == 1
    assert [e for e, _ in p.items()] == [(1, 0, 0), (0, 0, 0)]


def test_grlex_order():
    p = MultiPoly(V, {(0, 0, 2): 1, (1, 1, 0): 1, (2, 0, 0): 1, (0, 0, 1): 1, (0, 0, 0): 1})
    assert [e for e, _ in p.items()] == [(2, 0, 0), (1, 1, 0), (0, 0, 2), (0, 0, 1), (0, 0, 0)]


def test_exact_division():
    num = MultiPoly(V, {(2, 0, 0): 1, (0, 2, 0): -1})
    den = MultiPoly(V, {(1, 0, 0): 1, (0, 1, 0): -1})
    assert num.divide_exact(den) == MultiPoly(V, {(1, 0, 0): 1, (0, 1, 0): 1})
    assert den.divide_exact(num) is None


def test_partial_unknown_variable():
    with pytest.raises(UnknownVariable):
        MultiPoly.variable("x", V).partial("w")


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        RatFunc.variable("x", ("x",)) + RatFunc.variable("x", ("x", "y"))


# -- rational functions: worked examples --------------------------------------------------


def test_arith_examples():
    assert rf_eq(rf_arith("add", P("x"), P("y")), P("x+y"))
    prod = rf_arith("mul", P("(x^2+y^2)/2"), P("2"))
    assert prod.den.is_constant() and rf_eq(prod, P("x^2+y^2"))
    assert rf_eq(rf_arith("div", P("x^2-y^2"), P("x-y")), P("x+y"))
    assert rf_eq(rf_arith("neg", P("x")), P("-x"))


def test_divide_by_zero():
    with pytest.raises(DivisionByZero):
        rf_arith("div", P("x"), P("x-x"))
    with pytest.raises(DivisionByZero):
        P("0").inverse()


def test_eq_examples():
    assert rf_eq(P("(x^2-y^2)/(x-y)"), P("x+y"))
    assert rf_eq(P("0"), RatFunc(MultiPoly(V), P("x^2+1").num))
    assert not rf_eq(P("x/y"), P("y/x"))
    assert P("(x^2-y^2)/(x-y)") == P("x+y")


def test_partial_examples():
    assert rf_partial(P("(x^2+y^2)/2"), "x") == P("x")
    assert rf_partial(P("y^2"), "x").is_zero()
    assert rf_partial(P("1/x"), "x") == P("-1/x^2")
    with pytest.raises(UnknownVariable):
        rf_partial(P("x"), "w")


def test_reduction_is_best_effort_but_sound():
    f = P("(x^3*y + x*y^3)/(x^2*y)")
    # common monomial factor x*y is cancelled
    assert f.den == P("x").num
    g = P("(x^2 + 2*x*y + y^2)/(x + y)")
    assert g.den.is_constant()


def test_negative_powers():
    assert P("x") ** -2 == P("1/x^2")
    assert P("x/y") ** 0 == P("1")


def test_evaluate():
    assert P("(x^2+y^2)/(2*x)").evaluate({"x": 1, "y": 3, "z": 0}) == 5


# -- rational functions: laws --------------------------------------------------------------------


@given(ratfuncs, ratfuncs, ratfuncs)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == RatFunc.constant(0, V)
    assert a * RatFunc.constant(1, V) == a


@given(nonzero_ratfuncs)
def test_multiplicative_inverse(a):
    assert a * a.inverse() == RatFunc.constant(1, V)
    assert (a / a) == RatFunc.constant(1, V)


@given(ratfuncs, ratfuncs, st.sampled_from(V))
def test_leibniz(a, b, v):
    assert rf_partial(a * b, v) == rf_partial(a, v) * b + a * rf_partial(b, v)


@given(ratfuncs)
def test_commuting_partials(a):
    assert a.partial("x").partial("y") == a.partial("y").partial("x")
    assert a.partial("x").partial("z") == a.partial("z").partial("x")


@given(ratfuncs, ratfuncs, ratfuncs)
def test_eq_is_equivalence(a, b, c):
    assert rf_eq(a, a)
    assert rf_eq(a, b) == rf_eq(b, a)
    # build guaranteed-equal pairs with different representations
    k = RatFunc(MultiPoly(V, {(1, 0, 0): 1, (0, 0, 0): 1}))
    a2 = RatFunc(a.num * k.num, a.den * k.num)
    a3 = RatFunc(a2.num * c.den if not c.is_zero() else a2.num, a2.den * c.den if not c.is_zero() else a2.den)
    assert rf_eq(a, a2) and rf_eq(a2, a3) and rf_eq(a, a3)
    if rf_eq(a, b) and rf_eq(b, c):
        assert rf_eq(a, c)


@given(ratfuncs)
def test_denominator_normalised(a):
    lead = a.den.leading_term()[1]
    assert lead > 0
    assert all(c.denominator == 1 for c in a.den.terms.values())
