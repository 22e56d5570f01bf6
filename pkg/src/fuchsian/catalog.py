"""Constructors for the named operators E2, H3, H4, H5, H6, G6, E6 and the
self-adjoint instances saE2 .. saE6.

Every family is built in theta-form and converted to (x, D)-form.  The
accessory parameter always enters linearly.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Q, UniPoly, fmt_q
from .errors import RecognitionFailure, warn_nongeneric
from .fuchs import ExponentSet, RiemannScheme
from .linalg import solve
from .weyl import DiffOp, ThetaForm, adjoint, falling, from_theta_form, op_right_exact

TH = UniPoly.x()


def lin(c):
    """th + c."""
    return UniPoly((Q(c), 1))


def prod_lin(*cs):
    p = UniPoly.const(1)
    for c in cs:
        p = p * lin(c)
    return p


@dataclass
class NamedOperator:
    family: str
    params: tuple
    accessory: Fraction
    op: DiffOp
    scheme: RiemannScheme
    extra: dict = field(default_factory=dict)

    @property
    def order(self):
        return self.op.order()

    def label(self):
        ps = ",".join(fmt_q(v) for v in self.params)
        if self.accessory is None:
            return f"{self.family}({ps})"
        return f"{self.family}({ps}; {fmt_q(self.accessory)})"


# ---------------------------------------------------------------- E2

def e2_op(a, b, c) -> DiffOp:
    a, b, c = Q(a), Q(b), Q(c)
    return from_theta_form(ThetaForm({0: prod_lin(a, b), 1: -lin(c)}))


def build_E2(a, b, c) -> NamedOperator:
    a, b, c = Q(a), Q(b), Q(c)
    rs = RiemannScheme.of([0, 1 - c], [0, c - a - b], [a, b])
    return NamedOperator("E2", (a, b, c), None, e2_op(a, b, c), rs)


# ---------------------------------------------------------------- H3

def h3_theta(b, a00) -> ThetaForm:
    b1, b2, b3, b4, b5, b6 = (Q(v) for v in b)
    b7 = 3 - (b1 + b2 + b3 + b4 + b5 + b6)
    sn = prod_lin(b5, b6, b7)
    s0 = UniPoly((Q(a00),
                  -b1 * b2 + (b3 - 1) * (b4 - 1) - b5 * b6 - (b5 + b6) * b7,
                  2 * b1 + 2 * b2 + b3 + b4 - 3,
                  -2))
    s1 = prod_lin(1 - b1, 1 - b2)
    return ThetaForm({-1: sn, 0: s0, 1: s1})


def h3_scheme(b):
    b1, b2, b3, b4, b5, b6 = (Q(v) for v in b)
    b7 = 3 - (b1 + b2 + b3 + b4 + b5 + b6)
    return RiemannScheme.of([0, b1, b2], [0, b3, b4], [b5, b6, b7])


def build_H3(b, a00) -> NamedOperator:
    b = tuple(Q(v) for v in b)
    if len(b) != 6:
        raise ValueError("H3 takes six exponents b1..b6")
    return NamedOperator("H3", b, Q(a00), from_theta_form(h3_theta(b, a00)), h3_scheme(b))


def h3_adjoint_params(b, a00):
    """Exponents and accessory of the adjoint of H3(b, a00)."""
    e1, e2, e3, e4, e5, e6 = (Q(v) for v in b)
    a = (-e1 * e2 + (e1 + e2 + e3 + e4) * (e5 + e6 - 2) + (e5 - 1) ** 2 + (e6 - 1) ** 2
         + (e5 - 1) * (e6 - 1) - 1 - Q(a00))
    return (-e1, -e2, -e3, -e4, 2 - e5, 2 - e6), a


# ---------------------------------------------------------------- H4

def h4_theta(c, t10) -> ThetaForm:
    c1, c2, c3, c4, c5, c6, c7 = (Q(v) for v in c)
    c8 = 4 - (c1 + c2 + c3 + c4 + c5 + c6 + c7)
    t12 = c1 + c2 - c5 - c6 - c7 - c8 - 5
    t11 = (3 * (c1 + c2) - c1 * c2 + c3 * c4 - c5 * c6 - c5 * c7 - c5 * c8 - c6 * c7
           - c6 * c8 - c7 * c8 - 8)
    return ThetaForm({
        0: prod_lin(c5, c6, c7, c8),
        1: UniPoly((Q(t10), t11, t12, -2)),
        2: prod_lin(2 - c1, 2 - c2),
    })


def h4_scheme(c):
    c1, c2, c3, c4, c5, c6, c7 = (Q(v) for v in c)
    c8 = 4 - (c1 + c2 + c3 + c4 + c5 + c6 + c7)
    return RiemannScheme.of([0, 1, c1, c2], [0, 1, c3, c4], [c5, c6, c7, c8])


def build_H4(c, t10) -> NamedOperator:
    c = tuple(Q(v) for v in c)
    if len(c) != 7:
        raise ValueError("H4 takes seven exponents c1..c7")
    return NamedOperator("H4", c, Q(t10), from_theta_form(h4_theta(c, t10)), h4_scheme(c))


# ---------------------------------------------------------------- H6

def _es(e) -> ExponentSet:
    return e if isinstance(e, ExponentSet) else ExponentSet.of(e)


def h6_coefficients(e, t10):
    """T_ij of the theta-form, keyed by name."""
    e = _es(e)
    s11, s12, s13 = e.s1(1), e.s1(2), e.s1(3)
    s21, s22, s23 = e.s2(1), e.s2(2), e.s2(3)
    s31, s32, s33 = e.s3(1), e.s3(2), e.s3(3)
    t10 = Q(t10)
    t12 = -9 + s11 - 2 * s13
    t22 = 18 + s13 - 2 * s11
    t11 = (-8 + (s11 ** 2 + 2 * s11 * s13 - s12 ** 2 + s13 ** 2) / 3 + s11 - 5 * s13
           - s21 + s22 - 2 * s23)
    t21 = (35 + (-s11 ** 2 - 2 * s11 * s13 + s12 ** 2 - s13 ** 2) / 3 - 7 * s11 + 5 * s13
           + 2 * s21 - s22 + s23)
    t20 = (-t10 + 19
           + (s11 ** 2 * s13 - s11 * s12 ** 2 + s11 * s13 ** 2 - s12 ** 2 * s13) / 9
           + (s13 ** 3 + s11 ** 3 - 2 * s12 ** 3) / 27
           + (-2 * s11 ** 2 - 4 * s11 * s13 + s11 * s22 + 2 * s12 ** 2 + s22 * s12
              - 2 * s13 ** 2 + s22 * s13) / 3
           - 5 * s11 + 4 * s13 + 3 * s21 - 2 * s22 - s31 - s32 - s33)
    return {"T13": Fraction(-3), "T12": t12, "T11": t11, "T10": t10,
            "T23": Fraction(3), "T22": t22, "T21": t21, "T20": t20}


def h6_blocks(e, t10):
    """(B0, B1, B2) as polynomials in th."""
    e = _es(e)
    T = h6_coefficients(e, t10)
    b0 = prod_lin(e[7], e[8], e[9])
    b1 = UniPoly((T["T10"], T["T11"], T["T12"], T["T13"]))
    b2 = UniPoly((T["T20"], T["T21"], T["T22"], T["T23"]))
    return b0, b1, b2


def h6_theta(e, t10) -> ThetaForm:
    e = _es(e)
    s = e.s
    b0, b1, b2 = h6_blocks(e, t10)
    return ThetaForm({
        0: prod_lin(s + 2, s + 1, s) * b0,
        1: prod_lin(s + 2, s + 1) * b1,
        2: lin(s + 2) * b2,
        3: -prod_lin(3 - e[1], 3 - e[2], 3 - e[3]),
    })


def h6_scheme(e):
    e = _es(e)
    s = e.s
    return RiemannScheme.of([0, 1, 2, e[1], e[2], e[3]], [0, 1, 2, e[4], e[5], e[6]],
                            [s, s + 1, s + 2, e[7], e[8], e[9]])


def h6_genericity_issues(e):
    e = _es(e)
    s = e.s
    vals = {"s": s}
    for i in range(1, 10):
        vals[f"e{i}"] = e[i]
    for i in range(1, 7):
        vals[f"e{i}+s"] = e[i] + s
    return [k for k, v in vals.items() if v.denominator == 1]


def build_H6(e, t10, warn=False) -> NamedOperator:
    e = _es(e)
    if len(e) != 9:
        raise ValueError("H6 takes nine exponents e1..e9")
    if warn:
        bad = h6_genericity_issues(e)
        if bad:
            warn_nongeneric(f"non-generic H6 exponents: {', '.join(bad)} integral")
    return NamedOperator("H6", e.e, Q(t10), from_theta_form(h6_theta(e, t10)), h6_scheme(e))


def h6_accessory_direction(e) -> DiffOp:
    """d/dT10 of H6(e, T10)."""
    e = _es(e)
    return build_H6(e, 1).op - build_H6(e, 0).op


def h6_adjoint_params(e, t10):
    e = _es(e)
    s = e.s
    t = (6 * s ** 2 + (4 * e.s1(2) - 18) * s - 6 * e.s1(2) - 2 * e.s2(1) + 2 * e.s2(2)
         - 4 * e.s2(3) + 8 - Q(t10))
    new = tuple([2 - v for v in e.e[:6]] + [1 - v for v in e.e[6:]])
    return ExponentSet(new), t


def h6_1mx_params(e, t10):
    e = _es(e)
    s = e.s
    t = (3 * s ** 2 + (e.s1(1) + e.s1(2) - e.s2(3) + 2) * s + 3 * e.s1(1) + 3 * e.s1(2)
         - 3 * e.s2(3) - 3 * e.s3(3) - 21 - Q(t10))
    new = e.e[3:6] + e.e[0:3] + e.e[6:9]
    return ExponentSet(new), t


def h6_inv_params(e, t10):
    e = _es(e)
    s = e.s
    s11, s12 = e.s1(1), e.s1(2)
    t = (4 * s ** 3 + (3 * s11 + 9) * s ** 2 + (6 * s11 - s12 + 2 * e.s2(1) + e.s2(3) + 8) * s
         + e.s3(3) + 6 * s12 + 3 * e.s2(1) - 3 * e.s2(2) + 3 * e.s2(3) + e.s3(1) + e.s3(2) - 3
         + Q(t10))
    # the whole expression enters with a minus sign (checked against the operator)
    t = -t
    new = tuple([v - s for v in e.e[6:9]] + list(e.e[3:6]) + [v + s for v in e.e[0:3]])
    return ExponentSet(new), t


def _local_terms(op: DiffOp, pt: str):
    """[(c, j, off)]: coefficient, D-order and recurrence offset of each term."""
    from .weyl import substitute_1mx

    terms = (substitute_1mx(op) if pt == "1" else op).terms()
    if pt == "inf":
        return [(c, j, -(i - j)) for (i, j), c in terms.items()]
    return [(c, j, i - j) for (i, j), c in terms.items()]


def _oracle_functionals(op: DiffOp, pt: str, top: int, rho_list, resonant):
    """Linear functionals of op: coefficients of the indicial polynomial and
    the resonance conditions (rho, M) with all intermediate u_m set to zero."""
    from .fuchs import _falling_at

    sign = -1 if pt == "inf" else 1
    terms = _local_terms(op, pt)
    rho = UniPoly.x()
    ind = UniPoly()
    for c, j, off in terms:
        if off + top == 0:
            ind = ind + falling(j)(rho * sign) * c
    out = [ind.coeff(i) for i in range(7)]
    if pt != "inf":
        # the pole order is at most `top`: coefficients of x^i D^j, j - i > top
        local = {(j, off): c for c, j, off in terms}
        out.extend(local.get((j, -k), Fraction(0)) for j in range(7) for k in range(top + 1, j + 1))
    for r, M in resonant:
        out.append(sum((c * _falling_at(sign * r, j) for c, j, off in terms if off + top == M),
                       Fraction(0)))
    return out


def h6_oracle(e, t10) -> DiffOp:
    """Independent construction of H6(e, t10).

    Unknowns are the coefficients of p_j (deg p_j <= j, p_6 = x^3 (x-1)^3).
    Equations: the indicial polynomials at 0, 1, inf, the no-logarithm
    conditions for the integral exponent blocks, and the accessory fixed as
    the constant coefficient of p_1.  Nothing of the theta-form is used."""
    e = _es(e)
    s = e.s
    x = UniPoly.x()
    head = DiffOp([0] * 6 + [x ** 3 * (x - 1) ** 3])
    names = [(j, k) for j in range(6) for k in range(j + 1)]

    def basis(j, k):
        return DiffOp([0] * j + [x ** k])

    pts = [("0", 3, [0, 1, 2, e[1], e[2], e[3]], 0),
           ("1", 3, [0, 1, 2, e[4], e[5], e[6]], 0),
           ("inf", 0, [s, s + 1, s + 2, e[7], e[8], e[9]], s)]

    def functionals(op):
        out = []
        for pt, top, _, b in pts:
            out.extend(_oracle_functionals(op, pt, top, None, [(b, 1), (b, 2), (b + 1, 1)]))
        out.append(op.coeff(1).num.coeff(0))
        return out

    head_f = functionals(head)
    want = []
    for pt, top, roots, _ in pts:
        lead = _oracle_functionals(head, pt, top, None, [])[6]
        p = UniPoly.from_roots(roots, lead=lead)
        want.extend(p.coeff(i) for i in range(7))
        if pt != "inf":
            want.extend(0 for j in range(7) for k in range(top + 1, j + 1))
        want.extend([0, 0, 0])
    # p_1(0) is the constant term of T1 = (th+2+s)(th+1+s) B1 at th = 0
    want.append((s + 2) * (s + 1) * Q(t10))
    cols = [functionals(basis(j, k)) for (j, k) in names]
    rows = [[cols[c][r] for c in range(len(names))] for r in range(len(want))]
    rhs = [w - t for w, t in zip(want, head_f)]
    sol = solve(rows, rhs, len(names))
    if sol is None:
        raise RecognitionFailure("no operator with the H6 scheme and accessory")
    if len(names) - len(rref_pivots(rows, len(names))) != 0:
        raise RecognitionFailure("H6 oracle system is underdetermined")
    out = head
    for (j, k), v in zip(names, sol):
        if v:
            out = out + basis(j, k).scale(v)
    return out


def rref_pivots(rows, n):
    from .linalg import rref

    return rref(rows, n)[1]


# ---------------------------------------------------------------- H5

def h5_scheme(e):
    e = tuple(Q(v) for v in e)
    s = (6 - sum(e)) / 3
    return RiemannScheme.of([0, 1] + [v - 1 for v in e[0:3]], [0, 1] + [v - 1 for v in e[3:6]],
                            [s + 1, s + 2, s + 3, e[6] + 1, e[7] + 1])


def build_H5(e, b510) -> NamedOperator:
    """Right quotient of H6(e1..e8, 0; b510) by D."""
    e = tuple(Q(v) for v in e)
    if len(e) != 8:
        raise ValueError("H5 takes eight exponents e1..e8")
    h6 = build_H6(e + (Fraction(0),), b510).op
    op = op_right_exact(h6, DiffOp.D())
    return NamedOperator("H5", e, Q(b510), op, h5_scheme(e))


def h5_closed_form(e, b510) -> DiffOp:
    """x Tb0 + Tb1 + Tb2 D + Tb3 D^2 with Tb0 = (th+s+1)(th+s+2)(th+s+3)(th+e7+1)(th+e8+1)."""
    e = tuple(Q(v) for v in e)
    es = ExponentSet(e + (Fraction(0),))
    s = es.s
    _, b1, b2 = h6_blocks(es, b510)
    return from_theta_form(ThetaForm({
        -1: prod_lin(s + 1, s + 2, s + 3, e[6] + 1, e[7] + 1),
        0: prod_lin(s + 1, s + 2) * b1,
        1: lin(s + 2) * b2,
        2: -prod_lin(3 - e[0], 3 - e[1], 3 - e[2]),
    }))


# ---------------------------------------------------------------- G6 / E6

def s10(e) -> Fraction:
    e = _es(e)
    s11, s12, s13 = e.s1(1), e.s1(2), e.s1(3)
    s21, s22, s23 = e.s2(1), e.s2(2), e.s2(3)
    s31, s32, s33 = e.s3(1), e.s3(2), e.s3(3)
    return ((-5 - s21 + s22 - 5 * s23 + s31 - s32 - 3 * s33) / 2
            + (s11 - 7 * s13 + s11 * s13 + s11 * s23 - s13 * s21 + s13 * s22) / 3
            + (s11 ** 2 - s12 ** 2 + s13 ** 2 - s11 * s21 + s12 * s22 + s13 * s23) / 6
            + (s11 ** 2 - s12 ** 2) * s13 / 9 + (s11 ** 3 - s12 ** 3) / 27)


def r_value(e, a) -> Fraction:
    e = _es(e)
    a = [Q(v) for v in a]
    if len(a) != 7:
        raise ValueError("seven constants a0..a6 expected")
    ts = [e.t2(1), e.t2(2), e.t2(3), e.t3(1), e.t3(2), e.t3(3)]
    return a[0] + sum((ai * t for ai, t in zip(a[1:], ts)), Fraction(0))


@dataclass(frozen=True)
class AccessoryAssignment:
    mode: str  # "free" or "S10_plus_R"
    value: Fraction
    a: tuple = ()

    @classmethod
    def free(cls, v):
        return cls("free", Q(v))

    @classmethod
    def g6(cls, e, a):
        a = tuple(Q(v) for v in a)
        return cls("S10_plus_R", s10(e) + r_value(e, a), a)


def build_G6(e, a) -> NamedOperator:
    e = _es(e)
    acc = AccessoryAssignment.g6(e, a)
    named = build_H6(e, acc.value)
    return NamedOperator("G6", e.e, acc.value, named.op, named.scheme, {"a": acc.a})


def build_E6(e) -> NamedOperator:
    n = build_G6(e, [0] * 7)
    n.family = "E6"
    return n


# ---------------------------------------------------------------- accessory fitting

def fit_accessory(op: DiffOp, base: DiffOp, direction: DiffOp):
    """u with op ~ base + u*direction, allowing a left function factor on op."""
    if op.order() != base.order():
        raise RecognitionFailure("order mismatch")
    f = base.lead() / op.lead()
    X = op.scale(f)
    diff = X - base
    if diff.is_zero():
        return Fraction(0)
    for j, c in enumerate(direction.coeffs):
        if not c.is_zero():
            r = diff.coeff(j) / c
            if not r.is_constant():
                raise RecognitionFailure("accessory direction does not match")
            u = r.num.coeff(0)
            if diff == direction.scale(u):
                return u
            raise RecognitionFailure("operator differs from the family beyond the accessory")
    raise RecognitionFailure("family has no accessory direction")


def recognize(op: DiffOp, family: str, params) -> NamedOperator:
    """Match op (up to a left function factor) against family(params, u)."""
    builder = BUILDERS[family]
    base = builder(params, 0)
    if family == "E2":
        if not op.same_up_to_function(base.op):
            raise RecognitionFailure("not the expected E2")
        return base
    direction = builder(params, 1).op - base.op
    u = fit_accessory(op, base.op, direction)
    return builder(params, u)


BUILDERS = {
    "E2": lambda p, u=None: build_E2(*p),
    "H3": lambda p, u: build_H3(p, u),
    "H4": lambda p, u: build_H4(p, u),
    "H5": lambda p, u: build_H5(p, u),
    "H6": lambda p, u: build_H6(p, u),
}

NPARAMS = {"E2": 3, "H3": 6, "H4": 7, "H5": 8, "H6": 9}


# ---------------------------------------------------------------- self-adjoint

def _self_adjoint_accessory(builder, params):
    base = builder(params, 0).op
    direction = builder(params, 1).op - base
    n = base.order()
    c = -1 if n % 2 else 1
    lhs = direction - adjoint(direction).scale(c)
    rhs = adjoint(base).scale(c) - base
    for j, coef in enumerate(lhs.coeffs):
        if not coef.is_zero():
            u = (rhs.coeff(j) / coef)
            if u.is_constant():
                u = u.num.coeff(0)
                if base + direction.scale(u) == adjoint(base + direction.scale(u)).scale(c):
                    return u
    raise RecognitionFailure("no self-adjoint member in this family")


SA_SCHEMES = {
    "saE2": ("E2", (Fraction(1, 2), Fraction(1, 2), Fraction(1))),
    "saE3": ("H3", (0, 0, 0, 0, 1, 1)),
    "saE4": ("H4", (Fraction(1, 2),) * 7),
    "saE5": ("H5", (Fraction(3, 2),) * 6 + (0, 0)),
    "saE6": ("H6", (1,) * 6 + (Fraction(1, 2),) * 3),
}


def build_self_adjoint(name: str) -> NamedOperator:
    fam, params = SA_SCHEMES[name]
    params = tuple(Q(v) for v in params)
    if fam == "E2":
        n = build_E2(*params)
    else:
        builder = BUILDERS[fam]
        u = _self_adjoint_accessory(builder, params)
        n = builder(params, u)
    n.family = name
    return n
