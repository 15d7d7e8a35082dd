from fractions import Fraction

import pytest

from shapealg.bialgebra import (
    SYMBOLS,
    UQ_G0_SYMBOLS,
    UQ_G1_SYMBOLS,
    coproduct,
    coproduct_relation_check,
    matrix_membership_check,
    sub_bialgebra_check,
)
from shapealg.presentations import builtin


def test_coproduct_formulas():
    assert str(coproduct("K1")) == "K1⊗K1"
    assert str(coproduct("X2")) == "X2⊗1 + K2⊗X2"
    assert str(coproduct("Y2")) == "Y2⊗K2inv + 1⊗Y2"
    with pytest.raises(KeyError):
        coproduct("Z1")


def test_g1_closes():
    assert sub_bialgebra_check(UQ_G1_SYMBOLS)["pass"]
    assert sub_bialgebra_check(SYMBOLS)["pass"]


def test_g0_fails_with_witness():
    res = sub_bialgebra_check(UQ_G0_SYMBOLS)
    assert not res["pass"]
    assert res["witnesses"] == [("Y2", "K2inv")]


def test_matrix_corroboration():
    assert matrix_membership_check("K2inv", UQ_G1_SYMBOLS)[0]
    assert not matrix_membership_check("K2inv", UQ_G0_SYMBOLS)[0]
    assert not matrix_membership_check("K2", UQ_G0_SYMBOLS, r=Fraction(2))[0]
    assert matrix_membership_check("K1inv", ("K1",))[0]


@pytest.mark.parametrize("opposite", [False, True])
def test_coproduct_respects_relations(opposite):
    for rel in builtin("uq_sl3").relations:
        assert coproduct_relation_check(rel, opposite=opposite)["zero"], rel.format()


def test_coproduct_check_reports_defects():
    from shapealg.freealg import parse_expr

    gens = builtin("uq_sl3").gens
    res = coproduct_relation_check(parse_expr("X1*Y1 - Y1*X1", gens))
    assert not res["zero"] and res["defect"]
