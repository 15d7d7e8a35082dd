import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from shapealg.errors import NotClassical, SelectorMismatch
from shapealg.linalg import (
    RationalEchelon,
    checked_rank,
    in_span,
    laurent_nullspace,
    laurent_rank,
    rational_rank,
)
from shapealg.oracle import (
    DimTable,
    commutative_dims,
    compare,
    cumulative,
    filtered_localized_counts,
    table_from_counts,
)
from shapealg.presentations import builtin
from shapealg.rewrite import complete, count_irreducible
from shapealg.scalars import ZERO, LaurentScalar
from shapealg.weyl import weyl_dim

from conftest import scalars, small_fractions

rational_rows = st.lists(
    st.dictionaries(st.integers(0, 5), small_fractions, max_size=4), max_size=6)
laurent_rows = st.lists(st.dictionaries(st.integers(0, 4), scalars, max_size=3), max_size=5)


@given(rational_rows)
def test_rational_rank_matches_sympy(rows):
    m = sympy.Matrix([[sympy.Rational(r.get(c, 0)) for c in range(6)] for r in rows] or [[0] * 6])
    assert rational_rank(rows) == m.rank()


@given(rational_rows, st.randoms(use_true_random=False))
def test_rank_is_row_order_independent(rows, rnd):
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    assert rational_rank(rows) == rational_rank(shuffled)


@given(laurent_rows, st.randoms(use_true_random=False))
def test_laurent_rank_is_row_order_independent(rows, rnd):
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    assert laurent_rank(rows) == laurent_rank(shuffled)


@given(laurent_rows)
def test_fraction_free_rank_bounds_specialized_ranks(rows):
    rank, at, agree = checked_rank(rows)
    assert all(v <= rank for v in at.values())


def test_generic_points_detect_rank():
    q = LaurentScalar({1: 1})
    one = LaurentScalar(1)
    rows = [{0: one, 1: q}, {0: q, 1: q * q}]  # proportional over Q(q)
    assert checked_rank(rows) == (1, {"2": 1, "3/2": 1, "-5/3": 1}, True)
    rows = [{0: one, 1: q}, {0: one, 1: one}]  # dependent only at q = 1
    rank, at, agree = checked_rank(rows)
    assert rank == 2 and agree


@given(laurent_rows)
def test_nullspace_vectors_are_annihilated(rows):
    for v in laurent_nullspace(rows, 5):
        for r in rows:
            assert sum((r.get(c, ZERO) * x for c, x in v.items()), ZERO) == ZERO
    assert len(laurent_nullspace(rows, 5)) == 5 - laurent_rank(rows)


def test_in_span():
    q = LaurentScalar({1: 1})
    rows = [{0: LaurentScalar(1), 1: q}]
    assert in_span({0: q, 1: q * q}, rows)
    assert not in_span({0: LaurentScalar(1)}, rows)


def test_echelon_contains():
    ech = RationalEchelon()
    ech.add({0: 1, 1: 2})
    assert ech.contains({0: Fraction(1, 2), 1: 1})
    assert not ech.contains({1: 1})


# -- oracle -----------------------------------------------------------------


def test_commutative_dims_are_weyl_dimensions():
    table = commutative_dims(builtin("sl3_shape_classical"), 6)
    assert table.rows == {(a, b): weyl_dim(a, b) for a in range(7) for b in range(7 - a)}


def test_oracle_refuses_quantum_input():
    with pytest.raises(NotClassical):
        commutative_dims(builtin("sl3_shape_quantum"), 2)


def test_oracle_refuses_inhomogeneous_input():
    with pytest.raises(ValueError):
        commutative_dims(builtin("g1_shape_classical"), 2)


def test_oracle_is_relation_order_independent():
    pres = builtin("sl3_shape_classical")
    base = commutative_dims(pres, 4).rows
    rng = random.Random(0)
    for _ in range(3):
        rng.shuffle(pres.relations)
        assert commutative_dims(pres, 4).rows == base


def test_filtered_counts_match_rewrite():
    pres = builtin("g1_shape_classical")
    table = filtered_localized_counts(pres, 4, 2)
    per_len = count_irreducible(complete(pres, 6), "length", bound=4)
    assert table.rows == cumulative(table_from_counts("length", per_len)).rows
    assert all(table.stable.values())


def test_filtered_rows_are_monotone():
    rows = filtered_localized_counts(builtin("g1_shape_classical"), 4, 2).rows
    vals = [rows[L] for L in sorted(rows)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_zero_slack_is_never_flagged_stable():
    table = filtered_localized_counts(builtin("g1_shape_classical"), 2, 0)
    assert not any(table.stable.values())


def test_g0_p_degree_slices():
    table = filtered_localized_counts(builtin("g0_shape_classical"), 4, 2, p_degree=1)
    assert [table.rows[L] for L in range(1, 5)] == [weyl_dim(1, L - 1) for L in range(1, 5)]


def test_compare_and_serialization():
    a = table_from_counts("multidegree", {(0, 0): 1, (1, 0): 3})
    b = table_from_counts("multidegree", {(0, 0): 1, (1, 0): 2})
    assert compare(a, a) == []
    assert compare(a, b) == [{"key": (1, 0), "a": 3, "b": 2}]
    with pytest.raises(SelectorMismatch):
        compare(a, table_from_counts("length", {0: 1}))
    assert a.to_csv() == "n1,n2,count\n0,0,1\n1,0,3\n"
    assert a.to_json()["rows"][1] == {"n1": 1, "n2": 0, "count": 3}
    with pytest.raises(ValueError):
        DimTable("length", {0: -1})
