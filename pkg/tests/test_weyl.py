from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given

from conftest import ops, polys
from fuchsian import DiffOp, RatFunc, UniPoly, parse_op
from fuchsian.errors import NotDivisible, ParseError
from fuchsian.weyl import (
    adjoint,
    from_theta_form,
    op_left_divmod,
    op_right_divmod,
    op_right_exact,
    substitute_1mx,
    substitute_inv,
    to_theta_form,
)

X = sympy.Symbol("x")
x, D = DiffOp.x(), DiffOp.D()


def apply_sympy(op: DiffOp, expr):
    out = 0
    for j, c in enumerate(op.coeffs):
        cs = sympy.sympify(c.to_str().replace("^", "**"))
        out += cs * sympy.diff(expr, X, j)
    return sympy.simplify(out)


def test_commutator():
    assert D * x - x * D == DiffOp.const(1)
    assert DiffOp.theta() == x * D


@given(ops(), ops(), ops())
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(ops(), polys(3))
def test_action_matches_sympy(a, p):
    f = RatFunc(p)
    got = a.apply(f)
    expr = sympy.sympify(p.to_str().replace("^", "**")) if not p.is_zero() else sympy.Integer(0)
    expected = apply_sympy(a, expr)
    assert sympy.simplify(sympy.sympify(got.to_str().replace("^", "**")) - expected) == 0


@given(ops(), ops())
def test_action_is_composition(a, b):
    f = RatFunc(UniPoly([1, 2, 0, 3]))
    assert (a * b).apply(f) == a.apply(b.apply(f))


@given(ops(3), ops(2))
def test_right_divmod(a, b):
    assume(b.order() >= 0)
    q, r = op_right_divmod(a, b)
    assert q * b + r == a
    assert r.order() < b.order()


@given(ops(3), ops(2))
def test_left_divmod(a, b):
    assume(b.order() >= 0)
    q, r = op_left_divmod(a, b)
    assert b * q + r == a
    assert r.order() < b.order()


def test_exact_division_raises():
    with pytest.raises(NotDivisible):
        op_right_exact(D * D + x, D)


@given(ops(), ops())
def test_adjoint_antihomomorphism(a, b):
    assert adjoint(a * b) == adjoint(b) * adjoint(a)
    assert adjoint(adjoint(a)) == a


@given(ops())
def test_substitutions_are_involutions(a):
    assert substitute_1mx(substitute_1mx(a)) == a
    assert substitute_inv(substitute_inv(a)) == a


@given(ops(), ops())
def test_substitutions_are_homomorphisms(a, b):
    assert substitute_1mx(a * b) == substitute_1mx(a) * substitute_1mx(b)
    assert substitute_inv(a * b) == substitute_inv(a) * substitute_inv(b)


@given(ops(3, 3))
def test_theta_form_roundtrip(a):
    assume(a.is_polynomial() and not a.is_zero())
    assert from_theta_form(to_theta_form(a)) == a


def test_parse_op():
    assert parse_op("x*(1-x)*D^2 + (1/2 - 3*x)*D - 1") == \
        x * (1 - x) * D * D + (Fraction(1, 2) - 3 * x) * D - 1
    assert parse_op("th^2 - x*(th+1)") == DiffOp.theta() ** 2 - x * (DiffOp.theta() + 1)
    assert parse_op("D/(x-1)") == D.scale(RatFunc(UniPoly.const(1), UniPoly([-1, 1])))
    with pytest.raises(ParseError):
        parse_op("x/D")
    with pytest.raises(ParseError):
        parse_op("x +* D")


def test_json_roundtrip():
    a = parse_op("x^2*D^2 - (x-1/3)*D + 5")
    assert DiffOp.from_json(a.to_json()) == a
