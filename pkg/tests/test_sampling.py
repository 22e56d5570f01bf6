import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from fuchsian.sampling import (
    DENOMINATORS,
    NPARAMS,
    is_generic,
    random_exponent,
    random_params,
    scheme_of_operator,
)


@given(st.integers(0, 10**6))
def test_exponents_have_prescribed_denominators(seed):
    v = random_exponent(random.Random(seed))
    assert v.denominator in DENOMINATORS


@given(st.integers(0, 10**6), st.sampled_from(["E2", "H4", "H5", "H6"]))
def test_random_params_are_generic(seed, fam):
    p = random_params(fam, random.Random(seed))
    assert len(p) == NPARAMS[fam]
    assert is_generic(fam, p)


def test_same_seed_same_draw():
    assert random_params("H6", random.Random(7)) == random_params("H6", random.Random(7))


def test_integer_exponent_is_not_generic():
    assert not is_generic("E2", (Fraction(1), Fraction(1, 3), Fraction(2, 7)))
    assert not is_generic("E2", (Fraction(1, 3), Fraction(2, 7), Fraction(1, 3) + 2))


def test_scheme_from_operator():
    p = (Fraction(1, 3), Fraction(2, 7), Fraction(3, 11))
    assert scheme_of_operator("E2", p).at0 == (0, Fraction(8, 11))
