from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import nonint_q, ops
from fuchsian import build_E2, build_H3, build_H6
from fuchsian.fuchs import riemann_scheme
from fuchsian.transforms import (
    MOBIUS,
    MOBIUS_PERM,
    GaugeFactor,
    addition,
    conjugate,
    coordinate_permutation,
    mc_order_drop,
    middle_convolution,
    pipeline_H3_to_H6,
    pipeline_H6_to_H3,
)

params6 = st.lists(nonint_q, min_size=6, max_size=6)


@given(ops(), nonint_q, nonint_q)
def test_conjugation_inverts(a, g0, g1):
    f = GaugeFactor.of(g0, g1)
    assert conjugate(conjugate(a, f), f.inverse()) == a


@given(nonint_q, nonint_q, nonint_q, nonint_q, nonint_q)
def test_addition_shifts_scheme(a, b, c, g0, g1):
    n = build_E2(a, b, c)
    got = riemann_scheme(addition(n.op, GaugeFactor.of(g0, g1)))
    assert got == n.scheme.shifted(g0, g1)


@given(nonint_q, nonint_q, nonint_q, st.sampled_from(sorted(MOBIUS)))
def test_mobius_permutes_columns(a, b, c, name):
    n = build_E2(a, b, c)
    new = riemann_scheme(coordinate_permutation(n.op, name))
    old = dict(zip(("0", "1", "inf"), n.scheme.columns()))
    for pt, col in zip(("0", "1", "inf"), new.columns()):
        src = old[MOBIUS_PERM[name][pt]]
        # the columns agree up to the gauge that fixes 0 and 1
        diffs = {v - w for v in col for w in src}
        assert any(all((v - d) in src for v in col) for d in diffs)


@settings(max_examples=6)
@given(params6, nonint_q, nonint_q, nonint_q)
def test_h3_to_h6_pipeline(b, g0, g1, u):
    h3 = build_H3(b, Fraction(1, 3))
    res = pipeline_H3_to_H6(h3, g0, g1, u)
    assert res.result.op.order() == 6
    assert riemann_scheme(res.result.op) == res.result.scheme
    back = pipeline_H6_to_H3(res.result).result
    assert back.op.order() == 3


def test_middle_convolution_inverse():
    e = [Fraction(k, 13) for k in (1, 2, 3, 4, 5, 6, 7, 8, 9)]
    h6 = build_H6(e, Fraction(2, 3))
    mu = Fraction(3, 11)
    M = middle_convolution(h6.op, mu)
    assert middle_convolution(M, -mu).same_up_to_function(h6.op)
    assert M.order() == 6 - mc_order_drop(h6.scheme, mu)
