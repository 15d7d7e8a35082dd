from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given

from shapealg.errors import DivisionByZero, EvalAtZero, NotDivisible
from shapealg.scalars import (
    ONE,
    Q,
    ZERO,
    LaurentScalar,
    content,
    laurent_eval,
    laurent_exact_div,
    laurent_gcd,
    parse_scalar,
)

from conftest import nonzero_rationals, scalars


def test_canonical_form_drops_zero_coefficients():
    assert LaurentScalar({0: 0, 2: 0}) == ZERO
    assert LaurentScalar({1: 1, 3: 0}).terms == {1: 1}


def test_printing():
    assert str(LaurentScalar({1: 1, -1: -1})) == "q - q^-1"
    assert str(LaurentScalar({0: Fraction(3, 2), 2: -2})) == "-2*q^2 + 3/2"
    assert str(ZERO) == "0"


def test_units_and_inverse():
    x = LaurentScalar({3: Fraction(2, 5)})
    assert x.is_unit()
    assert x * x.inverse() == ONE
    with pytest.raises(NotDivisible):
        (Q + ONE).inverse()


def test_exact_division():
    a = (Q + ONE) * (Q - ONE) * Q**-2
    assert laurent_exact_div(a, Q - ONE) == (Q + ONE) * Q**-2
    with pytest.raises(NotDivisible):
        laurent_exact_div(Q + 2, Q - ONE)
    with pytest.raises(DivisionByZero):
        laurent_exact_div(Q, ZERO)


def test_eval_refuses_zero():
    assert laurent_eval(Q + Q**-1, 2) == Fraction(5, 2)
    with pytest.raises(EvalAtZero):
        laurent_eval(ONE, 0)


def test_parse_examples():
    assert parse_scalar("-(q + q^-1)") == -(Q + Q**-1)
    assert parse_scalar("3/2*q^2") == LaurentScalar({2: Fraction(3, 2)})


@given(scalars, scalars, scalars)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(scalars)
def test_parse_format_round_trip(a):
    assert parse_scalar(str(a)) == a


@given(scalars, scalars)
def test_division_undoes_multiplication(a, b):
    assume(not b.is_zero())
    assert laurent_exact_div(a * b, b) == a


@given(scalars, scalars, nonzero_rationals)
def test_evaluation_is_a_ring_map(a, b, r):
    assert laurent_eval(a * b, r) == laurent_eval(a, r) * laurent_eval(b, r)
    assert laurent_eval(a + b, r) == laurent_eval(a, r) + laurent_eval(b, r)


def _to_sympy(a, x):
    return sum((sympy.Rational(c.numerator, c.denominator) * x**e for e, c in a.items()),
               sympy.Integer(0))


@given(scalars, scalars)
def test_gcd_matches_sympy(a, b):
    assume(not a.is_zero() and not b.is_zero())
    x = sympy.Symbol("x")
    # shift to honest polynomials; the gcd in Q[q, q^-1] ignores powers of q
    pa = sympy.Poly(sympy.expand(_to_sympy(a, x) * x**3), x)
    pb = sympy.Poly(sympy.expand(_to_sympy(b, x) * x**3), x)
    g = sympy.gcd(pa, pb)
    while g.degree() > 0 and g.eval(0) == 0:
        g = sympy.Poly(sympy.quo(g.as_expr(), x), x)
    g = g.monic()
    mine = laurent_gcd(a, b)
    assert _to_sympy(mine, x).expand() == g.as_expr().expand()


@given(scalars, scalars)
def test_content_divides_every_entry(a, b):
    g = content([a, b])
    for v in (a, b):
        if not v.is_zero():
            laurent_exact_div(v, g)
