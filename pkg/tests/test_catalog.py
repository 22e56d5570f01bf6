from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nonint_q
from fuchsian import build_H3, build_H4, build_H5, build_H6, build_self_adjoint
from fuchsian.catalog import h6_oracle, recognize
from fuchsian.errors import RecognitionFailure
from fuchsian.fuchs import riemann_scheme
from fuchsian.weyl import adjoint

params9 = st.lists(nonint_q, min_size=9, max_size=9)


@settings(max_examples=8)
@given(params9, st.fractions(-3, 3, max_denominator=7))
def test_h6_matches_independent_oracle(e, t10):
    assert build_H6(e, t10).op.same_up_to_function(h6_oracle(e, t10))


@settings(max_examples=15)
@given(params9, st.fractions(-3, 3, max_denominator=7))
def test_h6_scheme_from_operator(e, t10):
    n = build_H6(e, t10)
    assert riemann_scheme(n.op) == n.scheme


@pytest.mark.parametrize("builder,k", [(build_H3, 6), (build_H4, 7), (build_H5, 8)])
@settings(max_examples=10)
@given(data=st.data())
def test_lower_schemes(builder, k, data):
    p = data.draw(st.lists(nonint_q, min_size=k, max_size=k))
    u = data.draw(st.fractions(-3, 3, max_denominator=5))
    n = builder(p, u)
    assert riemann_scheme(n.op) == n.scheme


@settings(max_examples=10)
@given(params9, st.fractions(-3, 3, max_denominator=7))
def test_recognize_recovers_accessory(e, t10):
    n = build_H6(e, t10)
    op = n.op.scale(7)
    assert recognize(op, "H6", e).accessory == t10


def test_recognize_rejects_other_exponents():
    e = [Fraction(k, 7) for k in range(1, 10)]
    op = build_H6(e, 0).op
    with pytest.raises(RecognitionFailure):
        recognize(op, "H6", [Fraction(k, 11) for k in range(1, 10)])


@pytest.mark.parametrize("name,sign,u", [
    ("saE2", 1, None), ("saE3", -1, Fraction(-1, 2)), ("saE4", 1, Fraction(-5, 2)),
    ("saE5", -1, Fraction(-1)), ("saE6", 1, Fraction(-17, 4)),
])
def test_self_adjoint_members(name, sign, u):
    n = build_self_adjoint(name)
    assert adjoint(n.op) == n.op.scale(sign)
    assert n.accessory == u
