import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapealg.errors import BoundExceeded, NonInvertibleLead, NotConfluent
from shapealg.freealg import GeneratorSet, NCPoly, parse_expr
from shapealg.presentations import builtin
from shapealg.rewrite import (
    MonomialOrder,
    RewriteRule,
    complete,
    count_irreducible,
    irreducible_words,
    orient,
    reduce,
    replay_witness,
)
from shapealg.report import random_poly, strategies_agree
from shapealg.scalars import LaurentScalar, laurent_eval
from shapealg.weyl import weyl_dim

from conftest import nonzero_rationals, scalars

SL3Q = builtin("sl3_shape_quantum")
SL3Q_REP = complete(SL3Q, 4)
G = SL3Q.gens


def P(text, gens=G):
    return parse_expr(text, gens)


# -- order and orientation --------------------------------------------------


def test_deglex_default_precedence():
    order = MonomialOrder(G)
    assert order.lt(P("p3*p3").terms.popitem()[0], P("p1*p1*p1").terms.popitem()[0])
    assert order.leading_word(P("p1*q1 + p3*q3")) == P("p3*q3").terms.popitem()[0]


def test_order_is_compatible_with_concatenation():
    order = MonomialOrder(G)
    rng = random.Random(1)
    for _ in range(200):
        u, v, a, b = (tuple(rng.randrange(6) for _ in range(rng.randint(0, 3))) for _ in range(4))
        if order.lt(u, v):
            assert order.lt(a + u + b, a + v + b)


def test_orient_printed_relations():
    assert orient(P("p1*p2 - q*p2*p1")).format() == "p2*p1 -> q^-1*p1*p2"
    rule = orient(P("p2*q2 + q^-1*p1*q1 + q*p3*q3"))
    assert rule.format() == "p3*q3 -> -q^-2*p1*q1 - q^-1*p2*q2"
    g1 = builtin("g1_shape_quantum_literal").gens
    assert orient(P("t*q3 - 1", g1)).format() == "t*q3 -> 1"


def test_orient_rejects_non_unit_lead():
    with pytest.raises(NonInvertibleLead):
        orient(P("(q + 1)*p2*p1 - p1*p2"))
    with pytest.raises(ValueError):
        orient(NCPoly(G))


def test_rule_as_relation_round_trip():
    rel = P("p1*p2 - q*p2*p1")
    rule = orient(rel)
    assert rule.as_relation() == rel.scale(-LaurentScalar({-1: 1}))


# -- reduction ---------------------------------------------------------------


def test_reduce_examples():
    assert reduce(P("p2*p1"), SL3Q_REP) == P("q^-1*p1*p2")
    assert reduce(P("p1"), SL3Q_REP) == P("p1")


def test_q2p2_normal_form():
    nf = reduce(P("q2*p2"), SL3Q_REP)
    assert nf == P("(q^-2 - 1)*p1*q1 + q^-1*p2*q2")
    # the hand substitution -p1*q1 - p3*q3 is the same class, not yet reduced
    assert reduce(P("-p1*q1 - p3*q3"), SL3Q_REP) == nf


def test_reduce_output_is_irreducible():
    rng = random.Random(3)
    leads = [r.lead for r in SL3Q_REP.rules]
    for _ in range(50):
        nf = reduce(random_poly(G, rng, 4), SL3Q_REP)
        for w in nf.terms:
            assert not any(
                w[k:k + len(L)] == L for L in leads for k in range(len(w) - len(L) + 1))


def test_unknown_strategy():
    with pytest.raises(ValueError):
        reduce(P("p1"), SL3Q_REP, strategy="sideways")


@given(st.integers(0, 10**6), scalars, scalars)
def test_reduce_is_linear(seed, a, b):
    rng = random.Random(seed)
    x, y = random_poly(G, rng, 4), random_poly(G, rng, 4)
    lhs = reduce(x.scale(a) + y.scale(b), SL3Q_REP)
    rhs = reduce(x, SL3Q_REP).scale(a) + reduce(y, SL3Q_REP).scale(b)
    assert lhs == rhs


@given(st.integers(0, 10**6))
def test_reduce_is_idempotent(seed):
    x = random_poly(G, random.Random(seed), 4)
    nf = reduce(x, SL3Q_REP)
    assert reduce(nf, SL3Q_REP) == nf


@given(st.integers(0, 10**6), st.sampled_from(
    ["sl3_shape_classical", "sl3_shape_quantum", "g1_shape_classical", "g0_shape_classical"]))
def test_strategies_agree_after_completion(seed, name):
    rep = complete(builtin(name), 4)
    assert strategies_agree(rep, random_poly(rep.gens, random.Random(seed), 4), seed)


@given(st.integers(0, 10**6), nonzero_rationals)
def test_specialization_commutes_with_reduction(seed, r):
    x = random_poly(G, random.Random(seed), 4)

    def ev(p):
        return p.map_coeffs(lambda c: LaurentScalar(laurent_eval(c, r)))

    rules = [RewriteRule(rule.lead, ev(rule.tail)) for rule in SL3Q_REP.rules]
    assert reduce(ev(x), rules, SL3Q_REP.order) == ev(reduce(x, SL3Q_REP))


# -- completion ---------------------------------------------------------------


def test_quantum_completion_is_confluent():
    assert SL3Q_REP.confluent and SL3Q_REP.collapse is None
    assert SL3Q_REP.bound == 4


def test_classical_completion_at_three():
    rep = complete(builtin("sl3_shape_classical"), 3)
    assert rep.confluent and rep.collapse is None


def test_literal_collapse_witness():
    pres = builtin("g1_shape_quantum_literal")
    rep = complete(pres, 3)
    assert not rep.confluent
    assert rep.collapse["kind"] == "unit" and rep.collapse["rule"] == "1 -> 0"
    overlap = [s for s in rep.collapse["chain"] if s["kind"] == "overlap"]
    assert overlap[0]["word"] == "t*q3*t"
    assert overlap[0]["spoly"] == "-(q - 1)*t"
    assert overlap[0]["result"] == "t -> 0"
    assert replay_witness(rep, pres)
    with pytest.raises(NotConfluent):
        count_irreducible(rep)


def test_tampered_witness_does_not_replay():
    pres = builtin("g1_shape_quantum_literal")
    rep = complete(pres, 3)
    rep.collapse["chain"][2]["spoly"] = "t"
    assert not replay_witness(rep, pres)


def test_no_witness_no_replay():
    assert not replay_witness(SL3Q_REP, SL3Q)


def test_strict_bound():
    with pytest.raises(BoundExceeded):
        complete(builtin("sl3_shape_classical"), 3, strict=True)


def test_report_serializes():
    js = json.loads(json.dumps(SL3Q_REP.to_json()))
    assert js["rule_count"] == len(SL3Q_REP.rules)
    assert js["collapse"] is None


def test_inclusion_ambiguity_is_processed():
    gens = GeneratorSet(["x", "y"], [(1, 0), (0, 1)])
    rels = [P("x*y*x - y", gens), P("y*x - x", gens)]
    rep = complete(rels, 4)
    # y*x -> x sits inside x*y*x; x*y*x -> x*x gives x*x = y
    assert reduce(P("x*y*x", gens), rep) == reduce(P("y", gens), rep)


def test_termination_on_random_input():
    rng = random.Random(5)
    for _ in range(20):
        reduce(random_poly(G, rng, 6, terms=8), SL3Q_REP)


# -- counting -----------------------------------------------------------------


def test_counts_examples():
    classical = count_irreducible(complete(builtin("sl3_shape_classical"), 2))
    assert classical[(1, 1)] == 8
    assert count_irreducible(SL3Q_REP, "length", bound=2)[2] == 20
    g1 = count_irreducible(complete(builtin("g1_shape_classical"), 4), "length", bound=2)
    assert g1[2] == 26


def test_inhomogeneous_counts_need_longer_overlaps():
    # t*p1 = p1*t only follows from the length-4 word t*p1*q3*t
    g1 = builtin("g1_shape_classical")
    assert count_irreducible(complete(g1, 2), "length")[2] == 31
    assert count_irreducible(complete(g1, 4), "length", bound=2)[2] == 26


def test_classical_counts_are_weyl_dimensions():
    counts = count_irreducible(complete(builtin("sl3_shape_classical"), 6))
    assert counts == {(a, b): weyl_dim(a, b) for a in range(7) for b in range(7 - a)}


def test_count_beyond_bound_refused():
    with pytest.raises(NotConfluent):
        count_irreducible(SL3Q_REP, bound=5)
    with pytest.raises(ValueError):
        count_irreducible(SL3Q_REP, "colour")


def test_irreducible_words_are_sorted_for_classical():
    rep = complete(builtin("sl3_shape_classical"), 3)
    for w in irreducible_words(rep, 3):
        assert list(w) == sorted(w)
