from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import polys, small_q
from fuchsian import RatFunc, UniPoly
from fuchsian.arith import fmt_q, parse_poly, parse_ratfunc, poly_gcd, poly_lcm, rational_roots
from fuchsian.arith import squarefree_decomposition

X = sympy.Symbol("x")


def to_sympy(p: UniPoly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p.coeffs])) or [0],
                      X, domain="QQ")


def to_fraction(v):
    v = sympy.Rational(sympy.simplify(v))
    return Fraction(int(v.p), int(v.q))


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == UniPoly()


@given(polys(), polys())
def test_product_matches_sympy(a, b):
    assert to_sympy(a * b) == to_sympy(a) * to_sympy(b)


@given(polys(6), polys(3))
def test_divmod_identity(a, b):
    assume(not b.is_zero())
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree() < b.degree()


@given(polys(5), polys(5), polys(2))
def test_gcd_matches_sympy(a, b, c):
    a, b = a * c, b * c
    assume(not (a.is_zero() and b.is_zero()))
    g = poly_gcd(a, b)
    expected = sympy.gcd(to_sympy(a), to_sympy(b)).monic()
    assert to_sympy(g) == expected


def test_gcd_long_inputs():
    a = UniPoly.from_roots([1, 2, Fraction(1, 3), 5, 7])
    b = UniPoly.from_roots([2, Fraction(1, 3), -4, 9])
    assert poly_gcd(a, b) == UniPoly.from_roots([2, Fraction(1, 3)])
    assert poly_lcm(a, b).degree() == 7


@given(st.lists(small_q, min_size=1, max_size=5), polys(2))
def test_rational_roots_recovered(roots, cofactor):
    assume(not cofactor.is_zero())
    p = UniPoly.from_roots(roots) * cofactor
    found, rest = rational_roots(p)
    assert set(roots) <= set(found)
    assert set(found) == {Fraction(int(r.p), int(r.q)) for r in sympy.roots(to_sympy(p), filter="Q")}


def test_squarefree():
    p = UniPoly.from_roots([1, 1, 1, 2, 2, 3])
    parts = squarefree_decomposition(p)
    prod = UniPoly.const(1)
    for item in parts:
        f, k = item
        prod = prod * f ** k
    assert prod.monic() == p.monic()


@given(polys(3), polys(3), polys(3))
def test_ratfunc_field(a, b, c):
    assume(not b.is_zero() and not c.is_zero())
    f = RatFunc(a, b)
    g = RatFunc(c, b + 1) if not (b + 1).is_zero() else RatFunc(c)
    assert (f + g) - g == f
    if not g.is_zero():
        assert (f * g) / g == f


@given(polys(3), polys(2), small_q)
def test_ratfunc_derivative_and_eval(a, b, t):
    assume(not b.is_zero() and b(t) != 0)
    f = RatFunc(a, b)
    sf = to_sympy(a).as_expr() / to_sympy(b).as_expr()
    at = sympy.Rational(t.numerator, t.denominator)
    assert f(t) == to_fraction(sf.subs(X, at))
    assert f.derivative()(t) == to_fraction(sympy.diff(sf, X).subs(X, at))


def test_parsing_roundtrip():
    p = parse_poly("3*x^2 - x/2 + 1/7")
    assert p == UniPoly([Fraction(1, 7), Fraction(-1, 2), 3])
    assert parse_poly(p.to_str()) == p
    f = parse_ratfunc("(x-1)/(x^2-1)")
    assert f == RatFunc(UniPoly.const(1), UniPoly([1, 1]))


def test_fmt_q():
    assert fmt_q(Fraction(-3, 4)) == "-3/4"
    assert fmt_q(Fraction(5)) == "5"


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        RatFunc.x() / RatFunc.const(0)
