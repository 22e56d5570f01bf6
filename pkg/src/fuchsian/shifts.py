"""Shift relations H(sh(e), u - alpha) o P = Q o H(e, u), S-values, inverse
shift operators and reducibility certificates."""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Q, RatFunc, UniPoly, fmt_q, rational_roots
from .catalog import (
    build_E2,
    build_E6,
    build_H3,
    build_H4,
    build_H5,
    build_H6,
    h6_1mx_params,
    h6_adjoint_params,
    h6_blocks,
    h3_adjoint_params,
    lin,
    prod_lin,
    r_value,
    s10,
)
from .errors import NoSolution, NonUnique, NotConstant, ObstructionAtPole, SymmetryUnavailable
from .fuchs import ExponentSet
from .linalg import det, nullspace
from .weyl import (
    DiffOp,
    ThetaForm,
    adjoint,
    from_theta_form,
    op_right_divmod,
    op_right_exact,
    substitute_1mx,
)

TH = UniPoly.x()


# ---------------------------------------------------------------- families

def _h6(p, u):
    return build_H6(p, u).op


def _h5(p, u):
    return build_H5(p, u).op


def _h4(p, u):
    return build_H4(p, u).op


def _h3(p, u):
    return build_H3(p, u).op


def _e2(p, u=None):
    return build_E2(*p).op


def _e6(p, u=None):
    return build_E6(p).op


FAMILY_BUILDERS = {"H6": _h6, "H5": _h5, "H4": _h4, "H3": _h3, "E2": _e2, "E6": _e6}
HAS_ACCESSORY = {"H6": True, "H5": True, "H4": True, "H3": True, "E2": False, "E6": False}


@dataclass(frozen=True)
class ShiftDescriptor:
    family: str
    name: str
    offsets: tuple

    def apply(self, params):
        return tuple(Q(p) + d for p, d in zip(params, self.offsets))

    def undo(self, params):
        return tuple(Q(p) - d for p, d in zip(params, self.offsets))

    def power(self, k):
        return ShiftDescriptor(self.family, f"{self.name}^{k}", tuple(k * d for d in self.offsets))


def _blocks(d1, d4, d7):
    return (d1,) * 3 + (d4,) * 3 + (d7,) * 3


SHIFTS = {
    "H6": {
        "-00": _blocks(-1, 0, 0), "0-0": _blocks(0, -1, 0), "--+": _blocks(-1, -1, 1),
        "+00": _blocks(1, 0, 0), "0+0": _blocks(0, 1, 0), "++-": _blocks(1, 1, -1),
        "00+": _blocks(0, 0, 1), "00-": _blocks(0, 0, -1),
    },
    "H5": {
        "-0": (-1, -1, -1, 0, 0, 0, 0, 0), "+0": (1, 1, 1, 0, 0, 0, 0, 0),
        "0-": (0, 0, 0, -1, -1, -1, 0, 0), "0+": (0, 0, 0, 1, 1, 1, 0, 0),
    },
    "H4": {"d": (-1, -1, -1, -1, 1, 1, 1), "d^-1": (1, 1, 1, 1, -1, -1, -1)},
    "H3": {
        "-0": (-1, -1, 0, 0, 0, 0), "+0": (1, 1, 0, 0, 0, 0),
        "0-": (0, 0, -1, -1, 0, 0), "0+": (0, 0, 1, 1, 0, 0),
    },
    "E2": {
        "a+": (1, 0, 0), "a-": (-1, 0, 0), "b+": (0, 1, 0), "b-": (0, -1, 0),
        "c+": (0, 0, 1), "c-": (0, 0, -1),
    },
}
SHIFTS["E6"] = SHIFTS["H6"]
ALIASES = {"sh1": "-00", "sh2": "0-0", "sh3": "--+"}


def shift_descriptor(family, name) -> ShiftDescriptor:
    name = ALIASES.get(name, name) if family in ("H6", "E6") else name
    try:
        return ShiftDescriptor(family, name, SHIFTS[family][name])
    except KeyError:
        raise ValueError(f"unknown shift {name!r} for {family}") from None


INVERSE_NAME = {"-00": "+00", "+00": "-00", "0-0": "0+0", "0+0": "0-0", "--+": "++-", "++-": "--+",
                "00+": "00-", "00-": "00+",
                "-0": "+0", "+0": "-0", "0-": "0+", "0+": "0-", "d": "d^-1", "d^-1": "d",
                "a+": "a-", "a-": "a+", "b+": "b-", "b-": "b+", "c+": "c-", "c-": "c+"}


# ---------------------------------------------------------------- ansatz

@dataclass(frozen=True)
class Ansatz:
    """Monomials x^i D^j allowed in P and in Q."""

    p_terms: tuple
    q_terms: tuple

    @staticmethod
    def _mono(order, extra):
        return tuple((i, j) for j in range(order + 1) for i in range(j + extra + 1))

    @classmethod
    def monomial(cls, order_p, extra_p=0, order_q=None, extra_q=None):
        """Coefficient of D^j of degree <= j + extra."""
        order_q = order_p if order_q is None else order_q
        extra_q = extra_p if extra_q is None else extra_q
        return cls(cls._mono(order_p, extra_p), cls._mono(order_q, extra_q))

    @staticmethod
    def _theta(shape):
        out = set()
        for k, deg in shape.items():
            for m in range(deg + 1):
                # x^-k th^m (k < 0) or th^m D^k: spanned by x^(m-k) D^m / x^m D^(m+k)
                for t in range(m + 1):
                    out.add((t - k, t) if k <= 0 else (t, t + k))
        return tuple(sorted(out))

    @classmethod
    def theta(cls, p_shape, q_shape=None):
        """Shapes {key: theta-degree}; key < 0 means x^-key P(th), key >= 0 P(th) D^key."""
        return cls(cls._theta(p_shape), cls._theta(q_shape or p_shape))

    def order_p(self):
        return max(j for _, j in self.p_terms)


DEFAULT_ANSATZ = {
    ("H6", "-00"): Ansatz.monomial(1, 0), ("H6", "0-0"): Ansatz.monomial(1, 0),
    ("H6", "--+"): Ansatz.monomial(1, 0), ("H6", "00+"): Ansatz.monomial(1, 1),
    ("H5", "-0"): Ansatz.monomial(1, 0), ("H5", "0-"): Ansatz.monomial(1, 0),
    ("H5", "+0"): Ansatz.theta({-3: 4, -2: 4, -1: 4, 0: 4, 1: 3}),
    ("H5", "0+"): Ansatz.theta({-3: 4, -2: 4, -1: 4, 0: 4, 1: 3}),
    ("H4", "d"): Ansatz.monomial(1, 0),
}


def default_ansatz(desc: ShiftDescriptor) -> Ansatz:
    key = (desc.family if desc.family != "E6" else "H6", desc.name)
    if key in DEFAULT_ANSATZ:
        return DEFAULT_ANSATZ[key]
    if desc.family == "E2":
        return Ansatz.monomial(1, 1)
    return Ansatz.monomial(1, 1)


# ---------------------------------------------------------------- solver

@dataclass
class ShiftTriple:
    P: DiffOp
    Q: DiffOp
    alpha: Fraction
    descriptor: ShiftDescriptor
    params: tuple = ()
    flags: list = field(default_factory=list)

    def to_json(self):
        return {"family": self.descriptor.family, "shift": self.descriptor.name,
                "P": self.P.to_str(), "Q": self.Q.to_str(), "alpha": fmt_q(self.alpha),
                "flags": list(self.flags)}


def _mono_op(i, j):
    return DiffOp([0] * j + [UniPoly.monomial(i)])


def _flatten(op: DiffOp):
    return op.terms()


def _columns(ops):
    """Rows of the coefficient matrix with one column per operator."""
    keys = sorted({k for op in ops for k in op})
    return [[op.get(k, Fraction(0)) for op in ops] for k in keys]


def _interpolate(xs, ys) -> UniPoly:
    out = UniPoly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        term = UniPoly.const(yi)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * UniPoly((-xj, 1)) * (1 / (xi - xj))
        out = out + term
    return out


def _combine(cols, vec):
    acc = {}
    for c, v in zip(cols, vec):
        if v:
            for k, val in c.items():
                acc[k] = acc.get(k, Fraction(0)) + v * val
    return acc


def _matmul(rows, basis):
    return [[sum((r[i] * b[i] for i in range(len(r)) if r[i] and b[i]), Fraction(0)) for b in basis]
            for r in rows]


def solve_shift_relation(family, params, sh, ansatz: Ansatz = None, alpha=None, seed=0,
                         allow_nonunique=False, u=None) -> ShiftTriple:
    """Find (P, Q, alpha) with H(sh(e), u - alpha) o P = Q o H(e, u) for all u.

    With ``u`` given the accessory parameter is frozen at that value, which
    is what inverse operators (whose P depends on u) need."""
    desc = sh if isinstance(sh, ShiftDescriptor) else shift_descriptor(family, sh)
    builder = FAMILY_BUILDERS[family]
    params = tuple(Q(p) for p in params)
    target = desc.apply(params)
    ansatz = ansatz or default_ansatz(desc)
    acc = HAS_ACCESSORY[family]
    frozen = acc and u is not None
    u0 = Q(u) if frozen else Fraction(0)
    H0 = builder(params, u0)
    H0t = builder(target, u0)
    H1 = builder(params, u0 + 1) - H0 if acc else DiffOp()
    H1t = builder(target, u0 + 1) - H0t if acc else DiffOp()

    np_, nq = len(ansatz.p_terms), len(ansatz.q_terms)
    n = np_ + nq
    A, B, U = [], [], []
    for (i, j) in ansatz.p_terms:
        m = _mono_op(i, j)
        A.append(_flatten(H0t * m))
        B.append(_flatten(H1t * m) if acc else {})
        U.append(_flatten(H1t * m) if acc else {})
    for (i, j) in ansatz.q_terms:
        m = _mono_op(i, j)
        A.append(_flatten(-(m * H0)))
        B.append({})
        U.append(_flatten(-(m * H1)) if acc else {})

    # u-independent part first: H1' P = Q H1
    Urows = _columns(U) if acc and not frozen else []
    K = nullspace(Urows, n) if Urows else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    if not K:
        raise NoSolution("no (P, Q) compatible with the accessory direction")
    AK = [_combine(A, v) for v in K]
    BK = [_combine(B, v) for v in K]

    def kernel_at(a):
        ops = [{k: AK[c].get(k, Fraction(0)) - a * BK[c].get(k, Fraction(0))
                for k in set(AK[c]) | set(BK[c])} for c in range(len(K))]
        return nullspace(_columns(ops), len(K))

    candidates = []
    if alpha is not None:
        candidates = [Q(alpha)]
    elif not any(BK):
        candidates = [Fraction(0)]
    else:
        rng = random.Random(seed)
        rowsA = _columns(AK + BK)
        half = len(K)
        rowsA, rowsB = [r[:half] for r in rowsA], [r[half:] for r in rowsA]
        k = len(K)
        W = [[Fraction(rng.randint(-9, 9)) for _ in rowsA] for _ in range(k)]
        WA, WB = _matmul_left(W, rowsA), _matmul_left(W, rowsB)
        xs = [Fraction(t) for t in range(k + 1)]
        ys = [det([[WA[r][c] - x * WB[r][c] for c in range(k)] for r in range(k)]) for x in xs]
        poly = _interpolate(xs, ys)
        if poly.is_zero():
            # degenerate projection or a free alpha: probe directly
            for trial in (Fraction(0), Fraction(1, 3), Fraction(-2, 7)):
                if kernel_at(trial):
                    candidates.append(trial)
        else:
            roots, _ = rational_roots(poly)
            candidates = sorted(roots)
    sols = []
    for a in candidates:
        ker = kernel_at(a)
        if ker:
            sols.append((a, ker))
    if not sols:
        raise NoSolution(f"no shift operator for {family} {desc.name} within the ansatz")
    if len(sols) > 1 and not allow_nonunique:
        raise NonUnique(f"several alpha values admit solutions: {[fmt_q(a) for a, _ in sols]}")
    a, ker = sols[0]
    flags = []
    if len(ker) > 1:
        if not allow_nonunique:
            raise NonUnique(f"solution space of dimension {len(ker)}")
        flags.append(f"nonunique:{len(ker)}")
    best = None
    for kv in ker:
        vec = [sum((kv[c] * K[c][i] for c in range(len(K)) if kv[c]), Fraction(0)) for i in range(n)]
        P = _assemble(ansatz.p_terms, vec[:np_])
        Qop = _assemble(ansatz.q_terms, vec[np_:])
        if P.is_zero():
            continue
        if best is None or P.order() < best[0].order():
            best = (P, Qop)
    if best is None:
        raise NoSolution("only solutions with P = 0")
    P, Qop = best
    lc = P.lead().num.lc()
    P, Qop = P.scale(1 / lc), Qop.scale(1 / lc)
    lhs = (H0t + H1t.scale(-a)) * P if acc else H0t * P
    if not lhs == Qop * H0:
        raise ArithmeticError("shift relation check failed")
    return ShiftTriple(P, Qop, a, desc, params, flags)


def _matmul_left(W, rows):
    ncols = len(rows[0]) if rows else 0
    return [[sum((w[r] * rows[r][c] for r in range(len(rows)) if w[r] and rows[r][c]), Fraction(0))
             for c in range(ncols)] for w in W]


def _assemble(terms, vec):
    d = {}
    for (i, j), v in zip(terms, vec):
        if v:
            d[(i, j)] = d.get((i, j), Fraction(0)) + v
    return DiffOp.from_terms(d) if d else DiffOp()


def check_shift_relation(family, params, triple: ShiftTriple, u=0) -> bool:
    builder = FAMILY_BUILDERS[family]
    params = tuple(Q(p) for p in params)
    target = triple.descriptor.apply(params)
    u = Q(u)
    if HAS_ACCESSORY[family]:
        return builder(target, u - triple.alpha) * triple.P == triple.Q * builder(params, u)
    return builder(target) * triple.P == triple.Q * builder(params)


# ---------------------------------------------------------------- S-values

@dataclass
class SValue:
    value: Fraction
    shift: str
    direction: str
    quotient: DiffOp = None

    def to_json(self):
        return {"value": fmt_q(self.value), "shift": self.shift, "direction": self.direction}


def reduce_mod(A: DiffOp, H: DiffOp):
    """(quotient, remainder) of right division by H."""
    return op_right_divmod(A, H)


def svalue(P_plus: DiffOp, P_minus: DiffOp, H: DiffOp, weight=None, shift="", direction="") -> SValue:
    """Constant c with P_plus o P_minus = W o H + c."""
    q, r = reduce_mod(P_plus * P_minus, H)
    if r.order() > 0 or (r.coeffs and not r.coeff(0).is_constant()):
        raise NotConstant(f"composition is not constant modulo H: remainder {r.to_str()}")
    val = r.coeff(0).num.coeff(0) if r.coeffs else Fraction(0)
    if weight is not None:
        w = RatFunc.coerce(weight)
        if not q == DiffOp.function(w):
            raise NotConstant("quotient differs from the stated weight")
    return SValue(val, shift, direction, q)


# ---------------------------------------------------------------- H6 operators

def h6_alpha(e, name):
    """alpha of the generator shifts, from the solved relation."""
    e = ExponentSet.of(e)
    s11, s12, s13 = e.s1(1), e.s1(2), e.s1(3)
    s21, s22, s23 = e.s2(1), e.s2(2), e.s2(3)
    if name == "-00":
        return s13 + s23 + 1
    if name == "0-0":
        return Fraction(0)
    if name == "--+":
        return (20 - s11 ** 2 / 3 - 2 * s11 * s13 / 3 + s12 ** 2 / 3 - s13 ** 2 / 3
                - 2 * s11 + 7 * s13 + s21 - s22 + 2 * s23)
    raise ValueError(name)


def h6_shift_operator(e, name, u=0):
    """Closed forms: (P, Q) for the three generator shifts."""
    e = ExponentSet.of(e)
    s = e.s
    x = DiffOp.x()
    D = DiffOp.D()
    if name == "-00":
        P = (x - 1) * D + s
        return P, (x - 1) * D + (s + 3)
    if name == "0-0":
        return x * D + s, x * D + (s + 3)
    if name == "--+":
        return D, D
    raise ValueError(name)


def h6_P0p0(e, t10) -> DiffOp:
    """Inverse of P_{0-0}: (th + s - 1) o P = x^3 H6 + Sv."""
    e = ExponentSet.of(e)
    s = e.s
    b0, b1, b2 = h6_blocks(e, t10)
    N = UniPoly.from_roots([0, 1, 2, e[1], e[2], e[3]])
    num = -(N - UniPoly.const(N(1 - s)))
    P0, rem = num.divmod(lin(s - 1))
    if rem:
        raise ObstructionAtPole("th + s - 1 does not divide")
    return from_theta_form(ThetaForm({
        -3: prod_lin(s + 1, s) * b0,
        -2: TH * lin(s) * b1.shift(-1),
        -1: TH * (TH - 1) * b2.shift(-2),
        0: P0,
    }))


def h6_P0p0_svalue(e):
    e = ExponentSet.of(e)
    s = e.s
    return (1 - s) * (-s) * (-1 - s) * (1 - s - e[1]) * (1 - s - e[2]) * (1 - s - e[3])


def h6_Pp00(e, t10) -> DiffOp:
    """Inverse of P_{-00}, transported from P_{0+0} by x -> 1 - x.

    The transport has head -x^3 (x-1)^5 D^5; we flip it to +x^3 (x-1)^5 D^5,
    so P_{-00}(e1 + 1) o P_{+00} = (x-1)^3 H6 + Sv."""
    e = ExponentSet.of(e)
    e2, t2 = h6_1mx_params(e, t10)
    return -substitute_1mx(h6_P0p0(e2, t2))


def h6_Pp00_svalue(e):
    e = ExponentSet.of(e)
    s = e.s
    return -(1 - s) * (-s) * (-1 - s) * (1 - s - e[4]) * (1 - s - e[5]) * (1 - s - e[6])


def h6_Ppp_m(e_shifted, t10_shifted) -> DiffOp:
    """P_{++-} at e' = sh3(e): (H6(e) - p0) / D, with the accessory carried back."""
    desc = shift_descriptor("H6", "--+")
    e = ExponentSet(desc.undo(ExponentSet.of(e_shifted).e))
    u = Q(t10_shifted) + h6_alpha(e, "--+")
    H = build_H6(e, u).op
    p0 = H.coeff(0)
    return op_right_exact(H - DiffOp.function(p0), DiffOp.D())


def h6_inverse_operator(e, t10, name) -> DiffOp:
    """P for the ascending generator shifts evaluated at (e, t10)."""
    if name == "0+0":
        return h6_P0p0(e, t10)
    if name == "+00":
        return h6_Pp00(e, t10)
    if name == "++-":
        return h6_Ppp_m(e, t10)
    raise ValueError(name)


def h6_svalue_formula(e, name):
    """Closed-form S-values of the descending generator shifts."""
    e = ExponentSet.of(e)
    s = e.s
    base = s * (s + 1) * (s + 2)
    if name == "--+":
        return -base * e[7] * e[8] * e[9]
    if name == "-00":
        return -base * (s + e[4]) * (s + e[5]) * (s + e[6])
    if name == "0-0":
        return base * (s + e[1]) * (s + e[2]) * (s + e[3])
    raise ValueError(name)


def h6_svalue(e, t10, name) -> SValue:
    """Sv for a descending generator: P_inv(sh(e), u - alpha) o P(e) mod H6(e, u)."""
    e = ExponentSet.of(e)
    desc = shift_descriptor("H6", name)
    P, _ = h6_shift_operator(e, name)
    e2 = ExponentSet(desc.apply(e.e))
    u2 = Q(t10) - h6_alpha(e, name)
    Pinv = h6_inverse_operator(e2, u2, INVERSE_NAME[name])
    return svalue(Pinv, P, build_H6(e, t10).op, shift=name, direction="minus")


# ---------------------------------------------------------------- H5 operators

def _h5_data(e, b510):
    e = tuple(Q(v) for v in e)
    es = ExponentSet(e + (Fraction(0),))
    r = -es.s
    _, b51, b52 = h6_blocks(es, b510)
    return e, r, b51, b52


def h5_shift_operator(e, name, b510=0):
    e, r, b51, b52 = _h5_data(e, b510)
    x, D = DiffOp.x(), DiffOp.D()
    if name == "-0":
        return (x - 1) * D + (1 - r), (x - 1) * D + (3 - r)
    if name == "0-":
        return x * D + (1 - r), x * D + (3 - r)
    if name in ("+0", "0+"):
        P = _h5_Pp0(e, b510) if name == "+0" else _h5_P0p(e, b510)
        # Q from the relation itself
        tgt = shift_descriptor("H5", name).apply(e)
        lhs = build_H5(tgt, Q(b510) - h5_alpha(e, name, b510)).op * P
        return P, op_right_exact(lhs, build_H5(e, b510).op)
    raise ValueError(name)


def _h5_Pp0(e, b510):
    e, r, b51, b52 = _h5_data(e, b510)
    e1, e2, e3, e7, e8 = e[0], e[1], e[2], e[6], e[7]
    f78 = prod_lin(e7 + 1, e8 + 1)
    P = ThetaForm({
        -3: prod_lin(1 - r, 2 - r) * f78,
        -2: -prod_lin(3 - 2 * r, 1 - r) * f78 + lin(1 - r) * b51,
        -1: f78 * (r * (r - 1)) - lin(2 - 2 * r) * b51 + TH * b52.shift(-1),
        0: -prod_lin(r - 1, 1 - e1, 1 - e2, 1 - e3) - lin(1 - r) * b52.shift(-1),
        1: prod_lin(2 - e1, 2 - e2, 2 - e3),
    })
    return from_theta_form(P)


def _h5_P0p(e, b510):
    e, r, b51, b52 = _h5_data(e, b510)
    e1, e2, e3, e7, e8 = e[0], e[1], e[2], e[6], e[7]
    s1 = e1 + e2 + e3
    s2 = e1 * e2 + e1 * e3 + e2 * e3
    s3 = e1 * e2 * e3
    P0 = UniPoly((
        -(r - 1) * (r - e1 + 1) * (r + 1 - e2) * (r + 1 - e3),
        -(r ** 3 + (2 - s1) * r ** 2 - (s1 - s2) * r - 2 + s1 - s3),
        -(r ** 2 + (2 - s1) * r - s1 + s2),
        -(r + 2 - s1),
        -1,
    ))
    P = ThetaForm({
        -3: prod_lin(1 - r, 2 - r, e7 + 1, e8 + 1),
        -2: lin(1 - r) * b51,
        -1: TH * b52.shift(-1),
        0: P0,
    })
    return from_theta_form(P)


def h5_alpha(e, name, b510=0):
    """H5 inherits alpha from H6 at e9 = 0; ascending ones are minus the
    descending alpha at the shifted point."""
    e = tuple(Q(v) for v in e)
    e9 = e + (Fraction(0),)
    if name == "-0":
        return h6_alpha(e9, "-00")
    if name == "0-":
        return Fraction(0)
    if name == "+0":
        up = tuple(v + (1 if i < 3 else 0) for i, v in enumerate(e9))
        return -h6_alpha(up, "-00")
    if name == "0+":
        return Fraction(0)
    raise ValueError(name)


def h5_svalue_formula(e, name):
    e = tuple(Q(v) for v in e)
    r = (sum(e) - 6) / 3
    if name == "-0":
        return (r - 1) * (r - 2) * (e[3] - r) * (e[4] - r) * (e[5] - r)
    if name == "0-":
        return -(r - 1) * (r - 2) * (e[0] - r) * (e[1] - r) * (e[2] - r)
    raise ValueError(name)


def h5_svalue(e, b510, name) -> SValue:
    e = tuple(Q(v) for v in e)
    desc = shift_descriptor("H5", name)
    P, _ = h5_shift_operator(e, name, b510)
    e2 = desc.apply(e)
    u2 = Q(b510) - h5_alpha(e, name, b510)
    Pinv, _ = h5_shift_operator(e2, INVERSE_NAME[name], u2)
    return svalue(Pinv, P, build_H5(e, b510).op, shift=name, direction="minus")


def h5_shift_from_h6(e, name, b510=0):
    """P2 for H5, obtained from the H6 relation at e9 = 0."""
    e = tuple(Q(v) for v in e)
    e9 = e + (Fraction(0),)
    name6 = {"-0": "-00", "0-": "0-0", "+0": "+00", "0+": "0+0"}[name]
    if name6 in ("-00", "0-0"):
        P6, _ = h6_shift_operator(e9, name6)
    else:
        P6 = h6_inverse_operator(e9, b510, name6)
    P1 = _conj_d(P6)
    H5 = build_H5(e, b510).op
    A, P2 = op_right_divmod(P1, H5)
    return P2


def _conj_d(P: DiffOp) -> DiffOp:
    """P1 with D o P = P1 o D."""
    return op_right_exact(DiffOp.D() * P, DiffOp.D())


# ---------------------------------------------------------------- H4

def h4_inverse_operator(c, t10):
    """R = (H4 - p0)/D at the source parameters."""
    H = build_H4(c, t10).op
    return op_right_exact(H - DiffOp.function(H.coeff(0)), DiffOp.D())


def h4_p0(c):
    c = tuple(Q(v) for v in c)
    c8 = 4 - sum(c)
    return c[4] * c[5] * c[6] * c8


# ---------------------------------------------------------------- E2

def e2_shift_operator(a, b, c, name):
    """Closed forms of the E2 contiguity operators."""
    a, b, c = Q(a), Q(b), Q(c)
    x, D = DiffOp.x(), DiffOp.D()
    xx1 = x * (x - 1)
    if name == "a+":
        return x * D + a, x * D + (a + 1)
    if name == "a-":
        P = xx1 * D + (x * b + (a - c))
        return P, P + (x - 1)
    if name == "b+":
        return x * D + b, x * D + (b + 1)
    if name == "b-":
        P = xx1 * D + (x * a + (b - c))
        return P, P + (x - 1)
    if name == "c+":
        P = (x - 1) * D + (a + b - c)
        return P, P
    if name == "c-":
        P = x * D + (c - 1)
        return P, P
    raise ValueError(name)


def e2_svalue_formula(a, b, c, name):
    a, b, c = Q(a), Q(b), Q(c)
    if name == "a-":
        return -(a - 1) * (a - c)
    if name == "b-":
        return -(b - 1) * (b - c)
    if name == "c-":
        return -(b - c + 1) * (a - c + 1)
    raise ValueError(name)


def e2_svalue(a, b, c, name) -> SValue:
    """Sv_{x-} = P_{x+}(x-1) o P_{x-}(x) mod E, with P_{a-} = x(1-x)D + c - a - bx."""
    a, b, c = Q(a), Q(b), Q(c)
    desc = shift_descriptor("E2", name)
    P, _ = e2_shift_operator(a, b, c, name)
    if name in ("a-", "b-"):
        P = -P
    a2, b2, c2 = desc.apply((a, b, c))
    Pinv, _ = e2_shift_operator(a2, b2, c2, INVERSE_NAME[name])
    return svalue(Pinv, P, build_E2(a, b, c).op, shift=name, direction="minus")


# ---------------------------------------------------------------- chains

def _chain_step(family, params, u, name):
    """(P, params', u') for one step of a shift chain."""
    if family == "E2":
        P, _ = e2_shift_operator(*params, name)
        if name in ("a-", "b-"):
            P = -P
        return P, shift_descriptor("E2", name).apply(params), None
    if family == "H6":
        desc = shift_descriptor("H6", name)
        if name in ("-00", "0-0", "--+"):
            P, _ = h6_shift_operator(params, name)
            return P, desc.apply(params), Q(u) - h6_alpha(params, name)
        inv = INVERSE_NAME[name]
        P = h6_inverse_operator(params, u, name)
        back = desc.apply(params)
        return P, back, Q(u) + h6_alpha(back, inv)
    raise ValueError(family)


def _family_op(family, params, u):
    return build_E2(*params).op if family == "E2" else build_H6(params, u).op


def remote_svalue(family, params, name, k, u=0):
    """(direct, product) for S(e, -k) along the descending shift `name`."""
    params = tuple(Q(p) for p in params)
    u = Q(u) if u is not None else None
    inv = INVERSE_NAME[name]
    H = _family_op(family, params, u)
    # walk down
    pts = [(params, u)]
    downs = []
    for _ in range(k):
        p, uu = pts[-1]
        P, p2, u2 = _chain_step(family, p, uu, name)
        downs.append(P)
        pts.append((p2, u2))
    acc = DiffOp.const(1)
    for P in downs:
        acc = op_right_divmod(P * acc, H)[1]
    for idx in range(k, 0, -1):
        p, uu = pts[idx]
        Pup, back, _ = _chain_step(family, p, uu, inv)
        acc = op_right_divmod(Pup * acc, H)[1]
    if acc.order() > 0 or (acc.coeffs and not acc.coeff(0).is_constant()):
        raise NotConstant("remote composition is not constant")
    direct = acc.coeff(0).num.coeff(0) if acc.coeffs else Fraction(0)
    prod = Fraction(1)
    for idx in range(k):
        p, uu = pts[idx]
        P = downs[idx]
        p2, u2 = pts[idx + 1]
        Pup, _, _ = _chain_step(family, p2, u2, inv)
        prod *= svalue(Pup, P, _family_op(family, p, uu)).value
    return direct, prod


# ---------------------------------------------------------------- P/Q duality

def _adjoint_map(family, params, u):
    params = tuple(Q(p) for p in params)
    if family == "E2":
        a, b, c = params
        return (1 - a, 1 - b, 2 - c), None
    if family == "H6":
        e2, t2 = h6_adjoint_params(params, u)
        return e2.e, t2
    if family == "H3":
        return h3_adjoint_params(params, u)
    raise SymmetryUnavailable(f"{family} has no adjoint symmetry here")


def q_from_p_via_adjoint(family, params, name, u=0, p_of=None):
    """Q = (-1)^nu P(adj(sigma(e)))^*.

    ``p_of(params, u)`` returns P at arbitrary parameters; by default the
    solver is used."""
    if family not in ("E2", "H6", "H3", "H4", "G6", "E6"):
        raise SymmetryUnavailable(f"{family} has no adjoint symmetry")
    if family not in ("E2", "H6", "H3"):
        raise SymmetryUnavailable(f"adjoint parameter map for {family} not tabulated")
    desc = shift_descriptor(family, name)
    params = tuple(Q(p) for p in params)
    tgt = desc.apply(params)
    if family == "E2":
        u_t = None
    else:
        alpha = solve_shift_relation(family, params, desc).alpha
        u_t = Q(u) - alpha
    adj_p, adj_u = _adjoint_map(family, tgt, u_t)
    if p_of is None:
        def p_of(pp, uu):
            return solve_shift_relation(family, pp, desc).P
    P = p_of(adj_p, adj_u)
    nu = P.order()
    return adjoint(P).scale(-1 if nu % 2 else 1)


# ---------------------------------------------------------------- certificates

def _is_int(v):
    return Q(v).denominator == 1


def reducibility_certificate(family, params):
    """Integer conditions that force reducibility."""
    p = tuple(Q(v) for v in params)
    out = []
    if family in ("H6", "G6", "E6"):
        e = ExponentSet(p)
        s = e.s
        if _is_int(s):
            out.append("s")
        for i in range(1, 7):
            if _is_int(e[i] + s):
                out.append(f"e{i}+s")
        for i in (7, 8, 9):
            if _is_int(e[i]):
                out.append(f"e{i}")
    elif family == "H5":
        r = (sum(p) - 6) / 3
        if _is_int(r):
            out.append("r")
        for i in range(6):
            if _is_int(p[i] - r):
                out.append(f"e{i + 1}-r")
    elif family == "H4":
        c8 = 4 - sum(p)
        for i, v in ((5, p[4]), (6, p[5]), (7, p[6]), (8, c8)):
            if _is_int(v):
                out.append(f"e{i}")
    elif family == "E2":
        a, b, c = p
        for name, v in (("a", a), ("b", b), ("c-a", c - a), ("c-b", c - b)):
            if _is_int(v):
                out.append(name)
    else:
        raise ValueError(f"no certificate for {family}")
    return out


# ---------------------------------------------------------------- G6

def g6_t10(e, a):
    return s10(e) + r_value(e, a)


def g6_shift_consistency(e, a, name, solve=True):
    """alpha(e) == T10(e) - T10(sh(e)) for T10 = S10 + R."""
    e = ExponentSet.of(e)
    desc = shift_descriptor("H6", name)
    e2 = ExponentSet(desc.apply(e.e))
    if solve:
        alpha = solve_shift_relation("H6", e.e, desc).alpha
    else:
        alpha = h6_alpha(e, name)
    return alpha == g6_t10(e, a) - g6_t10(e2, a)


def g6_inverse_affinity(e, name, a_values):
    """P_inv(e, S10 + R) is affine in R: second differences vanish."""
    e = ExponentSet.of(e)
    ops = [h6_inverse_operator(e, g6_t10(e, a), name) for a in a_values]
    Rs = [r_value(e, a) for a in a_values]
    if len(ops) < 3:
        raise ValueError("need three a-vectors")
    (r0, r1, r2), (p0, p1, p2) = Rs[:3], ops[:3]
    # (p1 - p0)/(r1 - r0) == (p2 - p0)/(r2 - r0)
    return (p1 - p0).scale(r2 - r0) == (p2 - p0).scale(r1 - r0)


def g6_inverse_r_direction(e, name):
    """Closed form of d P_inv / d R."""
    e = ExponentSet.of(e)
    s = e.s
    x, D = DiffOp.x(), DiffOp.D()
    if name == "+00":
        return ((x - 1) ** 3) * (x * D * D + (s + 1) * D)
    if name == "0+0":
        return (x ** 3) * ((x - 1) * D * D + (s + 1) * D)
    if name == "++-":
        return x * (x - 1) * D * D + (s + 1) * (2 * x - 1) * D + s * (s + 1)
    raise ValueError(name)
