from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonint_q
from fuchsian import DiffOp, build_E2, build_H6, parse_op
from fuchsian.errors import IrregularSingularity
from fuchsian.fuchs import (
    accessory_count,
    check_fuchs_relation,
    frobenius_series,
    indicial_polynomial,
    local_exponents,
    no_log_check,
    riemann_scheme,
)


def pochhammer(a, n):
    out = Fraction(1)
    for k in range(n):
        out *= a + k
    return out


@given(nonint_q, nonint_q, nonint_q)
def test_gauss_scheme(a, b, c):
    n = build_E2(a, b, c)
    rs = riemann_scheme(n.op)
    assert rs == n.scheme
    assert check_fuchs_relation(rs, 2)


@given(nonint_q, nonint_q, nonint_q)
def test_frobenius_is_hypergeometric_series(a, b, c):
    s = frobenius_series(build_E2(a, b, c).op, "0", 0, N=8)
    for n, coef in enumerate(s.coeffs):
        assert coef == pochhammer(a, n) * pochhammer(b, n) / (pochhammer(c, n) * pochhammer(1, n))


def test_indicial_at_zero():
    op = parse_op("x^2*D^2 + x*D - 1/4")
    p = indicial_polynomial(op, "0")
    assert sorted(local_exponents(op, "0").roots) == [Fraction(-1, 2), Fraction(1, 2)]
    assert p.degree() == 2


def test_irregular_point_detected():
    with pytest.raises(IrregularSingularity):
        local_exponents(parse_op("x^2*D - 1"), "0")


def test_logarithm_detection():
    # theta^2 has a log solution at 0, theta(theta-1) does not
    assert not no_log_check(parse_op("th^2"), "0")
    assert no_log_check(parse_op("th*(th-1)"), "0")


@given(st.lists(nonint_q, min_size=9, max_size=9))
def test_h6_scheme_satisfies_fuchs(e):
    n = build_H6(e, 0)
    assert check_fuchs_relation(n.scheme, 6)


@pytest.mark.parametrize("types,n,expected", [
    (("3111", "3111", "3111"), 6, 1),
    (("2111", "2111", "311"), 5, 1),
    (("211", "211", "1111"), 4, 1),
    (("111", "111", "111"), 3, 1),
    (("11", "11", "11"), 2, 0),
])
def test_accessory_count(types, n, expected):
    assert accessory_count(types, n) == expected


def test_series_is_annihilated():
    op = build_E2(Fraction(1, 3), Fraction(2, 7), Fraction(3, 5)).op
    s = frobenius_series(op, "0", Fraction(2, 5), N=10)
    assert s.exponent == Fraction(2, 5)
    assert s.coeffs[0] == 1
    assert isinstance(op, DiffOp)
