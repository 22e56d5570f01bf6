"""Explicit factorizations at special parameters, polynomial solutions,
recognition of factors up to the usual gauge moves, and the [1113]
decomposition of E6."""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import factorial

from .arith import Q, RatFunc, UniPoly, fmt_q, poly_lcm, rational_roots
from .catalog import (
    build_E2,
    build_E6,
    build_H4,
    build_H5,
    build_H6,
    build_self_adjoint,
    prod_lin,
    recognize,
)
from .errors import (
    CaseUndetermined,
    ConditionNotMet,
    IntegerExponent,
    NotDivisible,
    NotReducible,
    PoleAtSpecialS,
    RationalKernelNotFound,
    RecognitionFailure,
)
from .fuchs import ExponentSet, local_exponents, no_log_check, riemann_scheme
from .linalg import nullspace, rref
from .transforms import MOBIUS, GaugeFactor, conjugate, coordinate_permutation
from .weyl import (
    DiffOp,
    adjoint,
    op_left_exact,
    op_right_divmod,
    op_right_exact,
    substitute_shift,
)

_X = RatFunc.x()


def compose(factors):
    return reduce(lambda a, b: a * b, factors, DiffOp.const(1))


# ---------------------------------------------------------------- recognition

@dataclass
class Recognition:
    family: str
    params: tuple
    accessory: Fraction
    mobius: str
    gauge: tuple

    def to_json(self):
        return {"family": self.family, "params": [fmt_q(p) for p in self.params],
                "accessory": None if self.accessory is None else fmt_q(self.accessory),
                "mobius": self.mobius, "gauge": [fmt_q(g) for g in self.gauge]}


def _rest(col, start, k):
    """Column minus the block start, start+1, ..., start+k-1 (or None)."""
    c = Counter(col)
    for i in range(k):
        if c[start + i] <= 0:
            return None
        c[start + i] -= 1
    return sorted(c.elements())


def _block_starts(col, k):
    if k == 0:
        return [None]
    return sorted({v for v in col if _rest(col, v, k) is not None})


def _h5_params(r0, r1, rinf):
    return tuple(v + 1 for v in r0) + tuple(v + 1 for v in r1) + tuple(v - 1 for v in rinf)


# block sizes at 0, 1, inf and the map from leftover exponents to parameters
TEMPLATES = {
    "E2": ((1, 1, 0), lambda r0, r1, ri: (ri[0], ri[1], 1 - r0[0])),
    "H3": ((1, 1, 0), lambda r0, r1, ri: tuple(r0) + tuple(r1) + tuple(ri[:2])),
    "H4": ((2, 2, 0), lambda r0, r1, ri: tuple(r0) + tuple(r1) + tuple(ri[:3])),
    "H5": ((2, 2, 3), _h5_params),
    "H6": ((3, 3, 3), lambda r0, r1, ri: tuple(r0) + tuple(r1) + tuple(ri)),
}


def recognize_essentially(op: DiffOp, family: str) -> Recognition:
    """Match op against a family after a coordinate permutation of {0,1,inf},
    a right gauge x^g0 (x-1)^g1, a left function factor and a renaming of
    the exponents."""
    (k0, k1, ki), extract = TEMPLATES[family]
    order = op.order()
    for name in MOBIUS:
        b = coordinate_permutation(op, name)
        try:
            rs = riemann_scheme(b)
        except (ValueError, ArithmeticError):
            continue
        if len(rs.at0) != order:
            continue
        for g0 in _block_starts(rs.at0, k0):
            for g1 in _block_starts(rs.at1, k1):
                r0 = _rest([v - g0 for v in rs.at0], 0, k0)
                r1 = _rest([v - g1 for v in rs.at1], 0, k1)
                inf = [v + g0 + g1 for v in rs.atinf]
                b2 = conjugate(b, GaugeFactor(g0, g1)).normalized()
                for gi in _block_starts(inf, ki):
                    ri = inf if gi is None else _rest(inf, gi, ki)
                    try:
                        params = extract(r0, r1, ri)
                        n = recognize(b2, family, params)
                    except (RecognitionFailure, IndexError, ValueError, ZeroDivisionError):
                        continue
                    return Recognition(family, n.params, n.accessory, name, (g0, g1))
    raise RecognitionFailure(f"operator is not essentially {family}")


# ---------------------------------------------------------------- Factorization

def _monic(op: DiffOp) -> DiffOp:
    return op.scale(op.lead().inverse())


def singular_points(op: DiffOp):
    """(rational points outside {0, 1}, leftover polynomial) where the monic
    form of op has poles."""
    den = UniPoly.const(1)
    for c in _monic(op).coeffs:
        if not c.den.is_one():
            den = den * c.den
    if den.degree() <= 0:
        return [], UniPoly.const(1)
    roots, rest = rational_roots(den)
    return sorted(r for r in roots if r not in (0, 1)), rest


def apparent_at(op: DiffOp, c) -> bool:
    """The point c is apparent: non-negative integer exponents, no logarithms."""
    shifted = substitute_shift(op, c)
    exps = local_exponents(shifted, "0")
    if exps.unresolved.degree() > 0:
        return False
    if any(r.denominator != 1 or r < 0 for r in exps.roots):
        return False
    return no_log_check(shifted, "0")


@dataclass
class Factorization:
    source: DiffOp
    factors: list
    labels: list = field(default_factory=list)
    recognized: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def type_tag(self):
        return tuple(f.order() for f in self.factors)

    def product(self) -> DiffOp:
        return compose(self.factors)

    def verify(self) -> bool:
        p = self.product()
        return p == self.source or p.same_up_to_function(self.source)

    def exact(self) -> bool:
        return self.product() == self.source

    @property
    def apparent_singularities(self):
        pts = set()
        for f in self.factors:
            pts.update(singular_points(f)[0])
        return sorted(pts)

    def apparent_checks(self):
        """{(factor index, point): apparent?} for the rational extra points of
        the outer factors. The leftmost factor is tested through its adjoint,
        since it carries the dual exponents."""
        out = {}
        if len(self.factors) < 2:
            return out
        last = len(self.factors) - 1
        for i, op in ((0, adjoint(self.factors[0])), (last, self.factors[last])):
            for c in singular_points(self.factors[i])[0]:
                out[(i, c)] = apparent_at(op, c)
        return out

    def unresolved_singular_polys(self):
        return [singular_points(f)[1] for f in self.factors]

    def is_a0(self) -> bool:
        """No singular points outside {0, 1, inf} in any factor."""
        return all(not singular_points(f)[0] and singular_points(f)[1].degree() <= 0
                   for f in self.factors)

    def type_str(self):
        return "[" + ",".join(str(n) for n in self.type_tag) + "]"

    def to_json(self):
        return {
            "type": list(self.type_tag),
            "factors": [f.to_str() for f in self.factors],
            "labels": list(self.labels),
            "apparent_singularities": [fmt_q(v) for v in self.apparent_singularities],
            "a0": self.is_a0(),
            "apparent_checks": [{"factor": i + 1, "point": fmt_q(c), "apparent": ok}
                                for (i, c), ok in sorted(self.apparent_checks().items())],
            "recognized": {str(k): v.to_json() for k, v in sorted(self.recognized.items())},
            "verified": self.verify(),
        }


# ---------------------------------------------------------------- polynomial solutions

def polynomial_solutions(H: DiffOp, m: int):
    """Basis of the polynomials of degree <= m killed by H."""
    if m < 0:
        return []
    H = H.normalized()
    images = [H.apply(RatFunc(UniPoly.monomial(k))) for k in range(m + 1)]
    deg = max((im.num.degree() for im in images if not im.is_zero()), default=-1)
    rows = [[im.num.coeff(i) for im in images] for i in range(deg + 1)]
    return [UniPoly(v) for v in nullspace(rows, m + 1)]


def twisted_polynomial_solutions(H: DiffOp, mu, nu, m: int):
    """Polynomials g with H(x^mu (x-1)^nu g) = 0, degree <= m."""
    return polynomial_solutions(conjugate(H, GaugeFactor(Q(mu), Q(nu))), m)


def _exps(op, pt):
    try:
        return sorted(set(local_exponents(op, pt).roots))
    except (ValueError, ArithmeticError):
        return []


def hyperexponential_right_factor(op: DiffOp):
    """(F1, F2, (mu, nu, g)) with op = F1 o F2, F2 = D - G'/G and
    G = x^mu (x-1)^nu g, or None."""
    if op.order() < 2:
        return None
    op = op if op.is_polynomial() else op.normalized()
    cands = []
    for mu in _exps(op, "0"):
        for nu in _exps(op, "1"):
            for rho in _exps(op, "inf"):
                d = -rho - mu - nu
                if d.denominator == 1 and d >= 0:
                    cands.append((int(d), abs(mu) + abs(nu), mu, nu))
    for d, _, mu, nu in sorted(set(cands)):
        sols = twisted_polynomial_solutions(op, mu, nu, d)
        if not sols:
            continue
        g = min(sols, key=lambda p: (p.degree(), [abs(c) for c in p.coeffs]))
        g = g * (1 / g.lc())
        logd = RatFunc.const(mu) / _X + RatFunc.const(nu) / (_X - 1) \
            + RatFunc(g.derivative(), g)
        F2 = DiffOp([-logd, 1])
        try:
            F1 = op_right_exact(op, F2)
        except NotDivisible:
            continue
        return F1, F2, (mu, nu, g)
    return None


def hyperexponential_left_factor(op: DiffOp):
    """(L, R) with op = L o R and L of order one, or None."""
    found = hyperexponential_right_factor(adjoint(op))
    if found is None:
        return None
    A1, A2, _ = found
    L, R = adjoint(A2), adjoint(A1)
    if not L * R == op:
        f = (op.lead() / (L * R).lead())
        L = L.scale(f)
        if not L * R == op:
            return None
    return L, R


def peel_first_order(op: DiffOp):
    """Factor off order-one right factors, then order-one left factors."""
    rights, lefts = [], []
    rest = op
    while rest.order() > 1:
        found = hyperexponential_right_factor(rest)
        if found is None:
            break
        rest, F2, _ = found
        rights.append(F2)
    while rest.order() > 1:
        found = hyperexponential_left_factor(rest)
        if found is None:
            break
        L, rest = found
        lefts.append(L)
    return lefts + [rest] + list(reversed(rights))


# ---------------------------------------------------------------- H6

H6_CASES = ("e9=0", "e9=1", "s=1", "s=0", "s=-1", "s=-2")


def factor_H6_special(e, t10, which) -> Factorization:
    e = ExponentSet.of(e)
    H = build_H6(e, t10).op
    D = DiffOp.D()
    if which not in H6_CASES:
        raise ValueError(f"unknown case {which!r}")
    key, val = which.split("=")
    actual = e[9] if key == "e9" else e.s
    if actual != Q(val):
        raise ConditionNotMet(f"{which} does not hold ({key} = {fmt_q(actual)})")
    if which == "e9=0":
        H5 = op_right_exact(H, D)
        n = recognize(H5, "H5", e.e[:8])
        rec = Recognition("H5", n.params, n.accessory, "x", (Fraction(0), Fraction(0)))
        return Factorization(H, [H5, D], [n.label(), "D"], {0: rec})
    if which == "e9=1":
        X5 = op_left_exact(H, D)
        return Factorization(H, [D, X5], ["D", "X5"], {1: recognize_essentially(X5, "H5")})
    if which == "s=1":
        X = op_left_exact(H, D ** 3)
        return Factorization(H, [D, D, D, X], ["D", "D", "D", "X3"],
                             {3: recognize_essentially(X, "H3")})
    if which == "s=0":
        X = op_right_exact(op_left_exact(H, D ** 2), D)
        return Factorization(H, [D, D, X, D], ["D", "D", "X3", "D"],
                             {2: recognize_essentially(X, "H3")})
    if which == "s=-1":
        X = op_right_exact(op_left_exact(H, D), D ** 2)
        return Factorization(H, [D, X, D, D], ["D", "X3", "D", "D"],
                             {1: recognize_essentially(X, "H3")})
    X = op_right_exact(H, D ** 3)
    return Factorization(H, [X, D, D, D], ["X3", "D", "D", "D"],
                         {0: recognize_essentially(X, "H3")})


# ---------------------------------------------------------------- E2 (Kummer)

def hypergeometric_polynomial(a, b, c) -> UniPoly:
    """F(a, b, c; x) when a is a non-positive integer."""
    a, b, c = Q(a), Q(b), Q(c)
    if a.denominator != 1 or a > 0:
        raise ValueError("first parameter must be a non-positive integer")
    coeffs = [Fraction(1)]
    for k in range(int(-a)):
        if c + k == 0:
            raise ZeroDivisionError("lower parameter hits a non-positive integer")
        coeffs.append(coeffs[-1] * (a + k) * (b + k) / ((c + k) * (k + 1)))
    return UniPoly(coeffs)


def _is_int(v):
    return Q(v).denominator == 1


def _kummer_row(a, b, c):
    """(condition, kummer type, mu, nu, hypergeometric parameters)."""
    if _is_int(a):
        if a <= 0:
            return "a", "I", 0, 0, (a, b, c)
        return "a", "IV", 1 - c, c - a - b, (1 - a, 1 - b, 2 - c)
    if _is_int(b):
        if b <= 0:
            return "b", "I", 0, 0, (b, a, c)
        return "b", "IV", 1 - c, c - a - b, (1 - b, 1 - a, 2 - c)
    if _is_int(c - a):
        if c - a <= 0:
            return "c-a", "II", 0, c - a - b, (c - a, c - b, c)
        return "c-a", "III", 1 - c, 0, (a - c + 1, b - c + 1, 2 - c)
    if _is_int(c - b):
        if c - b <= 0:
            return "c-b", "II", 0, c - a - b, (c - b, c - a, c)
        return "c-b", "III", 1 - c, 0, (b - c + 1, a - c + 1, 2 - c)
    raise NotReducible("none of a, b, c-a, c-b is an integer")


def kummer_degree(a, b, c):
    """Degree of g predicted by the Kummer case list."""
    cond, typ, *_ = _kummer_row(Q(a), Q(b), Q(c))
    v = {"a": Q(a), "b": Q(b), "c-a": Q(c) - Q(a), "c-b": Q(c) - Q(b)}[cond]
    return int(-v) if v <= 0 else int(v) - 1


def factor_E2_kummer(a, b, c) -> Factorization:
    a, b, c = Q(a), Q(b), Q(c)
    cond, typ, mu, nu, hp = _kummer_row(a, b, c)
    g = hypergeometric_polynomial(*hp)
    E = build_E2(a, b, c).op
    logd = RatFunc.const(Q(mu)) / _X + RatFunc.const(Q(nu)) / (_X - 1) + RatFunc(g.derivative(), g)
    F2 = DiffOp([-logd, 1])
    F1 = op_right_exact(E, F2)
    f = Factorization(E, [F1, F2], ["F1", "F2"])
    f.extra = {"condition": cond, "kummer_type": typ, "mu": Q(mu), "nu": Q(nu), "g": g,
               "g_degree": g.degree()}
    return f


# ---------------------------------------------------------------- H5, H4

def factor_H5_cases(e, b510=0) -> Factorization:
    e = tuple(Q(v) for v in e)
    r = (sum(e) - 6) / 3
    triggered = [i for i in range(6) if _is_int(e[i] - r)]
    if not _is_int(r) and not triggered:
        raise ConditionNotMet("neither r nor any e_i - r is an integer")
    H = build_H5(e, b510).op
    D = DiffOp.D()
    if _is_int(r) and r >= 2:
        # the [1,1] part is D^2
        X = op_right_exact(H, D ** 2)
        f = Factorization(H, [X, D, D], ["X3", "D", "D"])
    else:
        parts = peel_first_order(H)
        f = Factorization(H, parts, [f"F{i + 1}" for i in range(len(parts))])
    for i, F in enumerate(f.factors):
        if F.order() in (3, 4):
            try:
                f.recognized[i] = recognize_essentially(F, "H3" if F.order() == 3 else "H4")
            except RecognitionFailure:
                pass
    f.extra = {"r": r, "e_minus_r": [e[i] - r for i in range(6)]}
    return f


def factor_H4_cases(c, t10=0) -> Factorization:
    c = tuple(Q(v) for v in c)
    c8 = 4 - sum(c)
    H = build_H4(c, t10).op
    D = DiffOp.D()
    if c[6] == 1:
        X = op_left_exact(H, D)
        n = recognize(X, "H3", c[:6])
        rec = Recognition("H3", n.params, n.accessory, "x", (Fraction(0), Fraction(0)))
        return Factorization(H, [D, X], ["D", n.label()], {1: rec})
    if c[6] == 0:
        X = op_right_exact(H, D)
        p = tuple(v - 1 for v in c[:4]) + (c[4] + 1, c[5] + 1)
        n = recognize(X, "H3", p)
        rec = Recognition("H3", n.params, n.accessory, "x", (Fraction(0), Fraction(0)))
        return Factorization(H, [X, D], [n.label(), "D"], {0: rec})
    if not any(_is_int(v) for v in (c[4], c[5], c[6], c8)):
        raise ConditionNotMet("none of e5, e6, e7, e8 is an integer")
    parts = peel_first_order(H)
    f = Factorization(H, parts, [f"F{i + 1}" for i in range(len(parts))])
    for i, F in enumerate(parts):
        if F.order() == 3:
            try:
                f.recognized[i] = recognize_essentially(F, "H3")
            except RecognitionFailure:
                pass
    return f


# ---------------------------------------------------------------- saE5

def sae5_factorization() -> Factorization:
    """The [1,3,1] decomposition of the self-adjoint H5."""
    x = DiffOp.x()
    D = DiffOp.D()
    H = build_self_adjoint("saE5").op
    left = (x ** 3) * ((x - 1) ** 3) * D + 3 * (x ** 2) * ((x - 1) ** 2) * (2 * x - 1)
    xx = UniPoly((0, -1, 1))  # x(x - 1)
    X = DiffOp([
        RatFunc(UniPoly((-1, 34, -96, 64)), xx ** 3 * 8),
        RatFunc(UniPoly((13, -76, 76)), xx ** 2 * 4),
        RatFunc(UniPoly((-9, 18)), xx * 2),
        1,
    ])
    return Factorization(H, [left, X, D], ["L", "X", "D"])


def sae5_middle_gauge(X: DiffOp):
    """(g0, g1) with X = f^-1 o saE3 o f up to a left function factor,
    f = x^g0 (x-1)^g1 and g0, g1 in {1/2, -1/2}; None if no sign choice fits."""
    sae3 = build_self_adjoint("saE3").op
    half = Fraction(1, 2)
    for g0 in (half, -half):
        for g1 in (half, -half):
            if conjugate(sae3, GaugeFactor(g0, g1)).same_up_to_function(X):
                return g0, g1
    return None


# ---------------------------------------------------------------- E6 interpolation

def _v_op(e8):
    """V with E6(e1..e8, 3 - sum) = D^3 o V."""
    e8 = tuple(Q(v) for v in e8)
    e9 = 3 - sum(e8)
    return op_left_exact(build_E6(e8 + (e9,)).op, DiffOp.D(3))


def e6_interpolation_sides(e):
    """(E6 - U, right-hand side) for the interpolative expression."""
    e = ExponentSet.of(e)
    s = e.s
    if s in (-2, -1, 0, 1):
        raise PoleAtSpecialS(f"s = {fmt_q(s)} is a pole of the interpolation")
    D = DiffOp.D()
    base = e.e[:8]

    def step(p):
        return tuple(v - 1 for v in p[:6]) + tuple(v + 1 for v in p[6:8])

    p1 = base
    p0 = step(p1)
    pm1 = step(p0)
    pm2 = step(pm1)
    V1, V0, Vm1, Vm2 = (_v_op(p) for p in (p1, p0, pm1, pm2))
    inner = ((D ** 3) * V1).scale(1 / (s - 1)) \
        - ((D ** 2) * V0 * D).scale(3 / s) \
        + (D * Vm1 * (D ** 2)).scale(3 / (s + 1)) \
        - (Vm2 * (D ** 3)).scale(1 / (s + 2))
    k = (s - 1) * s * (s + 1) * (s + 2)
    U = inner.scale(k / 6)
    E6 = build_E6(e).op
    x = DiffOp.x()
    e7, e8 = e[7], e[8]
    rhs = ((x * x - x + Fraction(1, 3)) * D * D + (x - Fraction(1, 2)) * (e7 + e8 + 1) * D
           + e7 * e8).scale(-3 * k)
    return E6 - U, rhs


def e6_interpolative_check(e) -> bool:
    lhs, rhs = e6_interpolation_sides(e)
    return lhs == rhs


# ---------------------------------------------------------------- [1113]

@dataclass
class Decomposition1113:
    n: int
    base: tuple
    E: DiffOp
    f: list
    Q1: DiffOp
    Q2: DiffOp
    P: DiffOp
    kernel_P: list
    h: list
    L: list
    checks: dict

    def all_hold(self):
        return all(self.checks.values())

    def to_json(self):
        return {"n": self.n, "base": [fmt_q(v) for v in self.base],
                "f": [str(v) for v in self.f], "Q1": self.Q1.to_str(), "Q2": self.Q2.to_str(),
                "L": [L.to_str() for L in self.L], "checks": dict(self.checks)}


def _common_den(funcs):
    den = UniPoly.const(1)
    for f in funcs:
        den = poly_lcm(den, f.den)
    return den


def _independent(funcs):
    """Greedy maximal linearly independent subfamily (over Q) of rational functions."""
    chosen, rows = [], []
    den = _common_den(funcs)
    for f in funcs:
        if f.is_zero():
            continue
        num = f.num * den.exact_div(f.den)
        trial = rows + [list(num.coeffs)]
        width = max(len(r) for r in trial)
        mat = [r + [Fraction(0)] * (width - len(r)) for r in trial]
        _, piv = rref(mat, width)
        if len(piv) == len(trial):
            rows.append(list(num.coeffs))
            chosen.append(f)
    return chosen


def e6_1113_decomposition(e8, n: int) -> Decomposition1113:
    """E6 at s = n + 1 via the recursion from E6(s = 1) = D^3 o V.

    ``e8`` lists e1..e8 of the s = 1 instance; e9 is 3 - sum(e8)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    e8 = tuple(Q(v) for v in e8)
    base = e8 + (3 - sum(e8),)
    if any(_is_int(v) for v in base[6:9]):
        raise IntegerExponent("e7, e8, e9 must be non-integers")
    D = DiffOp.D()
    E0 = build_E6(base).op
    Q1 = D ** 3
    Q2 = op_left_exact(E0, Q1)
    fs = []
    Ek = E0
    for _ in range(n):
        f = Q2.coeff(0)
        if f.is_zero():
            raise RationalKernelNotFound("Q2(1) vanishes")
        fs.append(f)
        Q1 = op_right_exact(D * Q1.scale(1) * DiffOp.function(f), D)
        Q2 = op_right_exact(D * DiffOp.function(f.inverse()) * Q2, D)
        Ek = op_right_exact(D * Ek, D)
    shifted = tuple(v - n for v in base[:6]) + tuple(v + n for v in base[6:])
    P = DiffOp.const(1)
    for f in fs:
        P = D * DiffOp.function(f.inverse()) * P
    checks = {}
    checks["E_n_is_E6_shifted"] = Ek == build_E6(shifted).op
    b0 = prod_lin(base[6], base[7], base[8])
    checks["E_n_at_1"] = Ek.apply(1) == RatFunc.const(
        Fraction(factorial(n + 3), factorial(n)) * b0(n))
    checks["Q1_Q2_is_E_n"] = Q1 * Q2 == Ek
    checks["Q1_P_is_D_power"] = Q1 * P == D ** (n + 3)
    monos = [RatFunc(UniPoly.monomial(k)) for k in range(n + 3)]
    images = [P.apply(m) for m in monos]
    # kernel of P on polynomials of degree <= n + 2
    den = _common_den(images)
    width = 1 + max((im.num.degree() + den.degree() for im in images if not im.is_zero()),
                    default=0)
    rows = [[(im.num * den.exact_div(im.den)).coeff(i) if not im.is_zero() else Fraction(0)
             for im in images] for i in range(width)]
    ker = [UniPoly(v) for v in nullspace(rows, n + 3)]
    checks["kernel_P_dim_n"] = len(ker) == n
    h_all = _independent(images)
    if len(h_all) != 3:
        raise RationalKernelNotFound(f"image of P has dimension {len(h_all)}, expected 3")
    # h3 is the image of the lowest monomial, then h2, h1
    h3, h2, h1 = h_all
    Qm = Q1.scale(Q1.lead().inverse())
    checks["h_solve_Q1"] = all(Qm.apply(h).is_zero() for h in (h1, h2, h3))
    f3 = h3.derivative() / h3
    L3 = DiffOp([-f3, 1])
    g2 = L3.apply(h2)
    f2 = g2.derivative() / g2
    L2 = DiffOp([-f2, 1])
    g1 = (L2 * L3).apply(h1)
    f1 = g1.derivative() / g1
    L1 = DiffOp([-f1, 1])
    scal = reduce(lambda a, b: a * b, fs, RatFunc.const(1))
    checks["L1L2L3_is_Q1"] = (L1 * L2 * L3).scale(scal) == Q1
    checks["round_trip_f3"] = L3.apply(h3).is_zero() and f3 == h3.derivative() / h3
    return Decomposition1113(n, base, Ek, fs, Q1, Q2, P, ker, [h1, h2, h3], [L1, L2, L3], checks)


# ---------------------------------------------------------------- propagation

def _solve_transport(P: DiffOp, F: DiffOp):
    """(F', C) with F' monic of order(F) and F' o P = C o F."""
    n = F.order()
    D = DiffOp.D()
    rems = []
    for j in range(n + 1):
        _, r = op_right_divmod((D ** j) * P, F)
        rems.append([r.coeff(k) for k in range(n)])
    # sum_j l_j rem_j + rem_n = 0 with l_n = 1
    zero = RatFunc.const(0)
    rows = [[rems[j][k] for j in range(n)] + [-rems[n][k]] for k in range(n)]
    red, piv = rref(rows, n + 1)
    if len(piv) < n or n in piv:
        raise CaseUndetermined("transport system is singular")
    sol = [zero] * n
    for i, p in enumerate(piv):
        sol[p] = red[i][n]
    Fp = DiffOp(sol + [RatFunc.const(1)])
    C, r = op_right_divmod(Fp * P, F)
    if not r.is_zero():
        raise CaseUndetermined("transported factor does not divide")
    return Fp, C


def propagate_factorization(H: DiffOp, Hp: DiffOp, P: DiffOp, Qop: DiffOp,
                            f: Factorization) -> Factorization:
    """From H = F1 o ... o Ft and Hp o P = Q o H, a factorization of Hp
    (order(P) = 1).  With order(Q) = 1 and f a factorization of Hp, the
    adjoint relation yields one of H."""
    if not Hp * P == Qop * H:
        raise CaseUndetermined("shift relation does not hold")
    if P.order() == 1 and f.source == H:
        return Factorization(Hp, _forward(Hp, P, Qop, list(f.factors)), [])
    if Qop.order() == 1 and f.source == Hp:
        # H* o Q* = P* o Hp*
        adj = _forward(adjoint(H), adjoint(Qop), adjoint(P),
                       [adjoint(F) for F in reversed(f.factors)])
        return Factorization(H, [adjoint(F) for F in reversed(adj)], [])
    raise CaseUndetermined("needs order(P) = 1 with a factorization of H, "
                           "or order(Q) = 1 with one of H'")


def _forward(Hp, P, Qop, factors):
    if len(factors) == 1:
        return [Hp]
    *head, Ft = factors
    P1, r = op_right_divmod(P, Ft)
    if r.is_zero():
        # P kills Sol(Ft): Hp o P1 = Q o F1 ... F_{t-1}
        if P1.order() != 0:
            raise CaseUndetermined("quotient of P by the last factor is not a function")
        out = [Qop] + head
        out[-1] = out[-1] * DiffOp.function(P1.coeff(0).inverse())
        return out
    Fp, C = _solve_transport(P, Ft)
    M = op_right_exact(Hp, Fp)
    rest = compose(head)
    if not M * C == Qop * rest:
        raise CaseUndetermined("transport identity failed")
    return _forward(M, C, Qop, head) + [Fp]
