from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nonint_q
from fuchsian import build_E2, build_H6
from fuchsian.arith import rational_roots
from fuchsian.errors import ConditionNotMet, NotReducible
from fuchsian.factor import (
    H6_CASES,
    e6_1113_decomposition,
    e6_interpolative_check,
    factor_E2_kummer,
    factor_H4_cases,
    factor_H5_cases,
    factor_H6_special,
    hyperexponential_right_factor,
    polynomial_solutions,
    propagate_factorization,
    sae5_factorization,
    sae5_middle_gauge,
)
from fuchsian.fuchs import frobenius_series
from fuchsian.shifts import e2_shift_operator

EXPECTED_TYPES = {
    "e9=0": (5, 1), "e9=1": (1, 5), "s=1": (1, 1, 1, 3), "s=0": (1, 1, 3, 1),
    "s=-1": (1, 3, 1, 1), "s=-2": (3, 1, 1, 1),
}
E8 = [Fraction(1, 7), Fraction(2, 11), Fraction(3, 13), Fraction(-1, 5), Fraction(2, 17),
      Fraction(1, 19), Fraction(3, 23), Fraction(-2, 29)]


def case_exponents(which):
    key, val = which.split("=")
    if key == "e9":
        return E8 + [Fraction(int(val))]
    s = int(val)
    return E8 + [6 - 3 * s - sum(E8)]


@pytest.mark.parametrize("which", H6_CASES)
def test_h6_special_cases(which):
    f = factor_H6_special(case_exponents(which), Fraction(1, 3), which)
    assert f.type_tag == EXPECTED_TYPES[which]
    assert f.exact()
    assert f.recognized


def test_h6_case_condition_checked():
    with pytest.raises(ConditionNotMet):
        factor_H6_special(E8 + [Fraction(1, 2)], 0, "e9=0")


def test_polynomial_solution_when_exponent_at_infinity_is_negative_integer():
    e = E8[:6] + [Fraction(-2)] + E8[6:]
    H = build_H6(e, Fraction(1, 3)).op
    sols = polynomial_solutions(H, 3)
    assert len(sols) == 1 and sols[0].degree() == 2
    assert H.apply(sols[0]).is_zero()


def test_constant_solution_of_gauss_at_a_zero():
    op = build_E2(0, Fraction(1, 3), Fraction(2, 7)).op
    assert [p.degree() for p in polynomial_solutions(op, 2)] == [0]
    F1, F2, (mu, nu, g) = hyperexponential_right_factor(op)
    assert F1 * F2 == op.normalized() or (F1 * F2).same_up_to_function(op)


@settings(max_examples=10)
@given(st.integers(0, 4), nonint_q, nonint_q)
def test_kummer_g_matches_frobenius(n, b, c):
    f = factor_E2_kummer(-n, b, c)
    assert f.verify()
    g = f.extra["g"]
    if f.extra["mu"] == 0 and f.extra["nu"] == 0:
        s = frobenius_series(build_E2(-n, b, c).op, "0", 0, N=n + 2)
        coeffs = [v / g.coeff(0) for v in g.coeffs]
        assert list(s.coeffs[: n + 1]) == coeffs
        assert all(v == 0 for v in s.coeffs[n + 1:])


@settings(max_examples=10)
@given(st.integers(-3, 3), nonint_q, nonint_q)
def test_kummer_apparent_points_are_zeros_of_g(k, b, c):
    a = k if k <= 0 else c + k
    try:
        f = factor_E2_kummer(a, b, c)
    except NotReducible:
        return
    g = f.extra["g"]
    roots = sorted(set(rational_roots(g)[0])) if g.degree() > 0 else []
    assert f.apparent_singularities == roots
    assert all(f.apparent_checks().values())


def test_not_reducible():
    with pytest.raises(NotReducible):
        factor_E2_kummer(Fraction(1, 2), Fraction(1, 3), Fraction(2, 7))


@pytest.mark.parametrize("r,expected", [(2, (3, 1, 1)), (0, (1, 1, 3)), (1, (1, 3, 1))])
def test_h5_integer_r(r, expected):
    e = list(E8[:5]) + [Fraction(0)] * 3
    e[5] = 6 + 3 * r - sum(e[:5]) - e[6] - e[7]
    f = factor_H5_cases(e, Fraction(2, 9))
    assert f.type_tag == expected
    assert f.verify()


@pytest.mark.parametrize("e7,expected", [(0, (3, 1)), (1, (1, 3)), (2, (1, 3))])
def test_h4_cases(e7, expected):
    c = E8[:6] + [Fraction(e7)]
    f = factor_H4_cases(c, Fraction(1, 3))
    assert f.type_tag == expected
    assert f.verify()
    assert all(f.apparent_checks().values())


def test_sae5():
    f = sae5_factorization()
    assert f.type_tag == (1, 3, 1) and f.exact()
    assert sae5_middle_gauge(f.factors[1]) == (Fraction(1, 2), Fraction(1, 2))


def test_interpolative_identity():
    assert e6_interpolative_check(E8 + [Fraction(1, 3)])


def test_1113_decomposition():
    d = e6_1113_decomposition(E8, 1)
    assert d.all_hold()


def test_propagation_matches_kummer():
    b, c = Fraction(1, 3), Fraction(2, 7)
    for a in (0, -1):
        f = factor_E2_kummer(a, b, c)
        P, Q = e2_shift_operator(a, b, c, "a+")
        Hp = build_E2(a + 1, b, c).op
        g = propagate_factorization(f.source, Hp, P, Q, f)
        assert g.verify()
        assert g.factors[-1].same_up_to_function(factor_E2_kummer(a + 1, b, c).factors[-1])
