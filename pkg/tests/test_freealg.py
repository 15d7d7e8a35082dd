import pytest
from hypothesis import given

from shapealg.errors import ExprSyntaxError, GeneratorSetMismatch, UnknownGenerator
from shapealg.freealg import GeneratorSet, NCPoly, parse_expr
from shapealg.scalars import ONE, Q

from conftest import GENS3, polys


def test_generator_set_validation():
    with pytest.raises(ValueError):
        GeneratorSet(["a", "a"], [(1, 0), (1, 0)])
    with pytest.raises(ValueError):
        GeneratorSet(["q"], [(1, 0)])
    with pytest.raises(ValueError):
        GeneratorSet(["a"], [(1, 0), (0, 1)])


def test_multidegree_and_degree():
    p = parse_expr("a*b*c + c", GENS3)
    assert p.degree() == 3
    assert GENS3.multidegree((0, 1, 2)) == (2, 1)
    assert not p.is_homogeneous()


def test_parse_and_format():
    p = parse_expr("q^-1*a*b - (q + 1)*b*a + 2", GENS3)
    assert p.coeff((0, 1)) == Q**-1
    assert p.coeff((1, 0)) == -(Q + ONE)
    assert p.format() == "2 + q^-1*a*b - (q + 1)*b*a"


def test_parse_errors():
    with pytest.raises(ExprSyntaxError):
        parse_expr("a*+b", GENS3)
    with pytest.raises(UnknownGenerator):
        parse_expr("a*z", GENS3)
    with pytest.raises(ExprSyntaxError):
        parse_expr("", GENS3)


def test_mixing_generator_sets_fails():
    other = GeneratorSet(["a"], [(1, 0)])
    with pytest.raises(GeneratorSetMismatch):
        GENS3.gen("a") * other.gen("a")


def test_noncommutative():
    a, b = GENS3.gen("a"), GENS3.gen("b")
    assert a * b != b * a
    assert (a * b - b * a).format() == "a*b - b*a"


@given(polys)
def test_format_parse_round_trip(p):
    assert parse_expr(p.format(), GENS3) == p


@given(polys, polys, polys)
def test_algebra_laws(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z
    assert x - x == NCPoly(GENS3)


@given(polys, polys)
def test_degree_of_product(x, y):
    if not x.is_zero() and not y.is_zero():
        assert (x * y).degree() == x.degree() + y.degree()
