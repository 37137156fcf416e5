import random
from fractions import Fraction

import pytest

from kvcert.errors import NegativeExponent, ParseError, UnknownVariable, ZeroDenominatorLiteral
from kvcert.expr import ExprSource, parse_expr, print_expr
from kvcert.poly import MultiPoly
from kvcert.ratfunc import RatFunc

V = ("x", "y")


def random_ratfunc(rng: random.Random, variables=("x", "y", "z")) -> RatFunc:
    def poly(nonzero):
        while True:
            terms = {}
            for _ in range(rng.randint(0, 4)):
                e = tuple(rng.randint(0, 2) for _ in variables)
                terms[e] = Fraction(rng.randint(-9, 9), rng.choice((1, 1, 2, 3, 7)))
            p = MultiPoly(variables, terms)
            if not nonzero or not p.is_zero():
                return p

    return RatFunc(poly(False), poly(True))


def test_round_trip_500():
    rng = random.Random(7)
    variables = ("x", "y", "z")
    for _ in range(500):
        f = random_ratfunc(rng, variables)
        assert parse_expr(print_expr(f), variables) == f


def test_print_examples():
    assert print_expr(parse_expr("0", V)) == "0"
    assert print_expr(parse_expr("(x^2+y^2)/2", V)) == "(x^2 + y^2)/2"
    assert print_expr(parse_expr("x*y", V)) == "x*y"
    assert print_expr(parse_expr("(x^2+y^2)/(2*x)", V)) == "(x^2 + y^2)/(2*x)"
    assert print_expr(parse_expr("-1/x^2", V)) == "-1/x^2"
    assert print_expr(parse_expr("3/4", V)) == "3/4"


def test_print_is_deterministic():
    a = parse_expr("(y + x)^2 - 2*x*y", V)
    b = parse_expr("y^2 + x^2", V)
    assert print_expr(a) == print_expr(b) == "x^2 + y^2"


def test_parse_examples():
    half = Fraction(1, 2)
    assert parse_expr("(x^2+y^2)/2", V) == RatFunc(MultiPoly(V, {(2, 0): half, (0, 2): half}))
    expected = RatFunc(MultiPoly(V, {(2, 0): 1, (0, 2): 1}), MultiPoly(V, {(1, 0): 2}))
    assert parse_expr("(x^2+y^2)/(2*x)", V) == expected
    assert parse_expr("0", V).is_zero()


def test_precedence_and_associativity():
    assert parse_expr("1+2*3") == RatFunc.constant(7, ())
    assert parse_expr("8/4/2") == RatFunc.constant(1, ())
    assert parse_expr("2-3-4") == RatFunc.constant(-5, ())
    assert parse_expr("-2^2") == RatFunc.constant(-4, ())
    assert parse_expr("(-2)^2") == RatFunc.constant(4, ())
    assert parse_expr("2*-x", V) == parse_expr("-2*x", V)
    assert parse_expr("  x  *\ty ", V) == parse_expr("x*y", V)


def test_chained_exponent_rejected():
    with pytest.raises(ParseError) as err:
        parse_expr("2^3^2")
    assert err.value.offset == 3


def test_exponent_must_be_literal():
    with pytest.raises(ParseError):
        parse_expr("x^y", V)
    with pytest.raises(NegativeExponent):
        parse_expr("x^-1", V)


def test_zero_denominator_literal():
    with pytest.raises(ZeroDenominatorLiteral) as err:
        parse_expr("x/0", V)
    assert err.value.offset == 2


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        parse_expr("x + w", V)
    assert err.value.name == "w"


@pytest.mark.parametrize("text,offset", [("x +", 3), ("(x", 2), ("x )", 2), ("x $ y", 2), ("", 0)])
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as err:
        parse_expr(text, V)
    assert err.value.offset == offset


def test_source_validation():
    with pytest.raises(ValueError):
        ExprSource("x", ("x", "x"))
    with pytest.raises(ValueError):
        ExprSource("x", ("1x",))
    assert parse_expr(ExprSource("a_1*b2", ("a_1", "b2"))) == parse_expr("b2*a_1", ("a_1", "b2"))
