import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapealg.errors import NegativeWeight
from shapealg.weyl import (
    IDENTITY,
    PRINTED_KEEP_LISTS,
    S1,
    S2,
    Weight,
    WeylElement,
    act_on_weight,
    enumerate_orthocells,
    is_effective,
    orthocell,
    pairing,
    weight_orbit,
    weyl_dim,
    weyl_group,
)

elements = st.sampled_from(weyl_group())
weights = st.tuples(st.integers(-4, 4), st.integers(-4, 4)).map(lambda t: Weight(*t))


def test_group_order_and_lengths():
    G = weyl_group()
    assert len(G) == 6
    assert [w.length() for w in G] == [0, 1, 1, 2, 2, 3]


def test_composition_convention():
    # (u * v)(k) = u(v(k))
    assert (S1 * S2).perm == (2, 3, 1)
    assert (S2 * S1).perm == (3, 1, 2)


def test_braid_relation():
    assert S1 * S2 * S1 == S2 * S1 * S2 == WeylElement.parse("[321]")


def test_parse_and_str():
    assert str(WeylElement.parse("231")) == "[231]"
    with pytest.raises(ValueError):
        WeylElement((1, 1, 2))


@given(elements, elements, elements)
def test_group_laws(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert u * u.inverse() == IDENTITY
    assert (u * v).sign() == u.sign() * v.sign()


@given(elements)
def test_reduced_word_realizes_element(w):
    out = IDENTITY
    for i in w.reduced_word:
        out = out * (S1 if i == 1 else S2)
    assert out == w and len(w.reduced_word) == w.length()


@given(elements)
def test_matrix_has_determinant_one(w):
    m = w.matrix()
    det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
           - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
           + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    assert det == 1


@given(weights)
def test_simple_reflections_are_involutions(lam):
    for s in (S1, S2):
        assert act_on_weight(s, act_on_weight(s, lam)) == lam


@given(weights, st.sampled_from([1, 2]))
def test_simple_reflection_formula(lam, i):
    s = S1 if i == 1 else S2
    alpha = Weight(2, -1) if i == 1 else Weight(-1, 2)
    k = pairing(lam, i)
    assert act_on_weight(s, lam) == lam - Weight(k * alpha.a, k * alpha.b)


@given(elements, elements, weights)
def test_action_is_a_group_action(u, v, lam):
    assert act_on_weight(u * v, lam) == act_on_weight(u, act_on_weight(v, lam))


def test_orbits():
    assert len(set(weight_orbit(Weight(1, 1)))) == 6
    assert len(set(weight_orbit(Weight(1, 0)))) == 3
    assert set(weight_orbit(Weight(0, 1))) == {Weight(0, 1), Weight(1, -1), Weight(-1, 0)}


def test_weyl_dim():
    assert [weyl_dim(1, 0), weyl_dim(1, 1), weyl_dim(2, 0), weyl_dim(2, 2)] == [3, 8, 6, 27]
    with pytest.raises(NegativeWeight):
        weyl_dim(-1, 0)


def test_fourteen_cells():
    cells = enumerate_orthocells()
    assert len(cells) == 14
    assert sum(c.trivial for c in cells) == 6
    assert sorted(str(c.w) for c in cells if c.trivial) == [
        "[123]", "[132]", "[213]", "[231]", "[312]", "[321]"]


def test_cell_sides():
    assert orthocell("C_1").members == {IDENTITY, S1}
    assert orthocell("C_7").side == "right"
    assert orthocell("C_7").members == {WeylElement.parse("132"), WeylElement.parse("312")}
    with pytest.raises(KeyError):
        orthocell("C_9")


def test_effectiveness_follows_rank():
    assert is_effective("C0_3", 1, 2)
    assert is_effective("C_2", 1, 2) and is_effective("C_5", 1, 2)
    assert not is_effective("C_3", 1, 2)
    for ij in ((1, 1), (2, 2)):
        for name in PRINTED_KEEP_LISTS[ij]:
            assert is_effective(name, *ij)
    with pytest.raises(ValueError):
        is_effective("C_1", 3, 1)
