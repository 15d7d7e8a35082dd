"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from shapealg.freealg import GeneratorSet, NCPoly
from shapealg.scalars import LaurentScalar

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)

scalars = st.dictionaries(
    st.integers(min_value=-3, max_value=3), small_fractions, max_size=4
).map(LaurentScalar)

nonzero_rationals = small_fractions.filter(lambda r: r != 0)

GENS3 = GeneratorSet(["a", "b", "c"], [(1, 0), (1, 0), (0, 1)])

words = st.lists(st.integers(min_value=0, max_value=2), max_size=3).map(tuple)

polys = st.dictionaries(words, scalars, max_size=4).map(lambda d: NCPoly(GENS3, d))


def frac(x):
    return Fraction(x)
