from fractions import Fraction

import pytest
from hypothesis import given

from shapealg.errors import EvalAtZero, PresentationFormatError, UnknownPresentation
from shapealg.presentations import (
    builtin,
    catalog_names,
    classical_partner,
    dump_presentation,
    load_presentation,
    parse_presentation,
    specialize_q,
    validate_grading,
)

from conftest import nonzero_rationals

SIZES = {
    "sl3_shape_classical": 16,
    "sl3_shape_quantum": 16,
    "g1_shape_classical": 18,
    "g1_shape_quantum_literal": 18,
    "g1_shape_quantum_amended": 23,
    "g0_shape_classical": 17,
    "sl3_shape_quantum_modules": 16,
    "g1_shape_quantum_modules": 18,
    "uq_sl3": 21,
    "uq_g1": 15,
    "uq_g0": 9,
}


def test_catalog_sizes():
    assert set(catalog_names()) == set(SIZES)
    for name, n in SIZES.items():
        assert len(builtin(name).relations) == n, name


@pytest.mark.parametrize("name", sorted(SIZES))
def test_catalog_entries_validate(name):
    assert validate_grading(builtin(name))["ok"]


def test_quadratic_shape_presentations_are_homogeneous():
    for name in ("sl3_shape_classical", "sl3_shape_quantum", "sl3_shape_quantum_modules"):
        pres = builtin(name)
        assert all(r.degree() == 2 and r.is_homogeneous() for r in pres.relations)


def test_localization_relations_are_whitelisted():
    g1 = builtin("g1_shape_quantum_literal")
    texts = {g1.relations[i].format() for i in g1.inhomogeneous}
    assert {"-1 + t*q3", "-q + q3*t"} <= texts


def test_unknown_name():
    with pytest.raises(UnknownPresentation):
        builtin("sl4_shape")


def test_builtin_returns_fresh_copies():
    a = builtin("sl3_shape_quantum")
    a.relations.pop()
    assert len(builtin("sl3_shape_quantum").relations) == 16


def test_partners():
    assert classical_partner("sl3_shape_quantum") == "sl3_shape_classical"
    assert classical_partner("g1_shape_quantum_amended") == "g1_shape_classical"
    assert classical_partner("sl3_shape_classical") is None


def test_specialize_at_one_is_classical():
    pres = specialize_q(builtin("sl3_shape_quantum"), 1)
    assert pres.is_classical()
    with pytest.raises(EvalAtZero):
        specialize_q(pres, 0)


@given(nonzero_rationals, nonzero_rationals)
def test_specialization_composes_with_evaluation(r, s):
    once = specialize_q(builtin("sl3_shape_quantum"), r)
    twice = specialize_q(once, s)
    assert [x.format() for x in twice.relations] == [x.format() for x in once.relations]


@pytest.mark.parametrize("name", ["sl3_shape_quantum", "g1_shape_quantum_literal", "uq_sl3"])
def test_dump_parse_round_trip(name):
    pres = builtin(name)
    back = parse_presentation(dump_presentation(pres), name)
    assert back.gens == pres.gens
    assert back.relations == pres.relations
    assert back.inhomogeneous == pres.inhomogeneous


def test_file_format(tmp_path):
    path = tmp_path / "toy.txt"
    path.write_text(
        "# a toy algebra\n"
        "generators: x(1,0) y(0,1)\n"
        "x*y = q*y*x\n"
        "x*x - 1   # inhomogeneous\n",
        encoding="utf-8",
    )
    pres = load_presentation(str(path))
    assert pres.name == "toy"
    assert [r.format() for r in pres.relations] == ["x*y - q*y*x", "-1 + x*x"]
    assert pres.inhomogeneous == {1}
    assert validate_grading(pres)["ok"]


def test_unflagged_inhomogeneous_relation_is_a_violation():
    pres = parse_presentation("generators: x(1,0)\nx*x - x\n")
    report = validate_grading(pres)
    assert not report["ok"] and report["violations"][0]["index"] == 0


@pytest.mark.parametrize("text", [
    "x*y\n",
    "generators: x(1,0) junk\nx\n",
    "generators: x(1,0)\nx - x\n",
    "# only a comment\n",
])
def test_bad_files(text):
    with pytest.raises(PresentationFormatError):
        parse_presentation(text)


def test_specialize_keeps_rational_values():
    pres = specialize_q(builtin("sl3_shape_quantum"), Fraction(3, 2))
    assert pres.relations[0].format() == "p1*p2 - 3/2*p2*p1"
