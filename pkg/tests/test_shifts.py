from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nonint_q
from fuchsian import build_E2, build_H6
from fuchsian.errors import NotConstant
from fuchsian.shifts import (
    Ansatz,
    check_shift_relation,
    e2_shift_operator,
    e2_svalue,
    e2_svalue_formula,
    h6_svalue,
    h6_svalue_formula,
    reducibility_certificate,
    remote_svalue,
    shift_descriptor,
    solve_shift_relation,
    svalue,
)
from fuchsian.weyl import DiffOp

params9 = st.lists(nonint_q, min_size=9, max_size=9)
E2_NAMES = ("a+", "a-", "b+", "b-", "c+", "c-")


@given(nonint_q, nonint_q, nonint_q, st.sampled_from(E2_NAMES))
def test_e2_contiguity_relation(a, b, c, name):
    P, Q = e2_shift_operator(a, b, c, name)
    target = shift_descriptor("E2", name).apply((a, b, c))
    assert build_E2(*target).op * P == Q * build_E2(a, b, c).op


@given(nonint_q, nonint_q, nonint_q, st.sampled_from(("a-", "b-", "c-")))
def test_e2_svalues(a, b, c, name):
    assert e2_svalue(a, b, c, name).value == e2_svalue_formula(a, b, c, name)


@settings(max_examples=4)
@given(nonint_q, nonint_q, nonint_q, st.sampled_from(("a+", "c-")))
def test_solver_recovers_e2_operators(a, b, c, name):
    t = solve_shift_relation("E2", (a, b, c), name)
    assert check_shift_relation("E2", (a, b, c), t)
    P, _ = e2_shift_operator(a, b, c, name)
    assert t.P.equals_up_to_scalar(P)


@settings(max_examples=3)
@given(params9, st.sampled_from(("-00", "0-0", "--+")))
def test_h6_solver_and_svalue(e, name):
    t = solve_shift_relation("H6", e, name)
    assert check_shift_relation("H6", e, t, u=Fraction(5, 3))
    assert h6_svalue(e, Fraction(2, 7), name).value == h6_svalue_formula(e, name)


def test_svalue_rejects_nonconstant():
    H = build_E2(Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)).op
    with pytest.raises(NotConstant):
        svalue(DiffOp.D(), DiffOp.x(), H)


@pytest.mark.parametrize("name", ["a-", "c-"])
def test_remote_svalue_is_product(name):
    args = (Fraction(2, 7), Fraction(3, 11), Fraction(5, 13))
    direct, prod = remote_svalue("E2", args, name, 3)
    assert direct == prod


def test_certificates():
    assert reducibility_certificate("E2", (0, Fraction(1, 3), Fraction(1, 2))) == ["a"]
    assert reducibility_certificate("E2", (Fraction(1, 3), Fraction(1, 5), Fraction(7, 3))) == ["c-a"]
    e = [Fraction(k, 7) for k in range(1, 9)] + [Fraction(2)]
    assert "e9" in reducibility_certificate("H6", e)
    assert build_H6(e, 0).op.order() == 6


def test_ansatz_shapes():
    a = Ansatz.monomial(1, 0)
    assert set(a.p_terms) == {(0, 0), (0, 1), (1, 1)}
    assert a.order_p() == 1
    with pytest.raises(ValueError):
        shift_descriptor("H6", "nope")
