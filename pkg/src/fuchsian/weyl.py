"""Differential operators in Q(x)[D] and their theta-forms.

A ``DiffOp`` is ``sum_j c_j(x) D^j`` with the coefficient written to the left
of the power of D.  A ``ThetaForm`` groups an operator with polynomial
coefficients by weight: part ``k < 0`` stands for ``x^(-k) P_k(th)`` and part
``k >= 0`` for ``P_k(th) D^k``, where ``th = x D``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .arith import Q, RatFunc, UniPoly, fmt_q, poly_gcd, poly_lcm
from .errors import DivisionByZero, NotDivisible, ParseError, TruncationTooShort

_RZERO = RatFunc.const(0)
_RONE = RatFunc.const(1)


class DiffOp:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [RatFunc.coerce(v) for v in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.coeffs = tuple(c)

    # constructors -------------------------------------------------------
    @classmethod
    def D(cls, k=1):
        return cls([0] * k + [1])

    @classmethod
    def x(cls):
        return cls([RatFunc.x()])

    @classmethod
    def theta(cls):
        return cls([0, RatFunc.x()])

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def function(cls, f):
        return cls([f])

    @classmethod
    def from_terms(cls, terms):
        """From {(i, j): c} meaning c x^i D^j."""
        order = max((j for (_, j) in terms), default=-1)
        polys = [[] for _ in range(order + 1)]
        for (i, j), c in terms.items():
            p = polys[j]
            while len(p) <= i:
                p.append(Fraction(0))
            p[i] += Q(c)
        return cls([UniPoly(p) for p in polys])

    @staticmethod
    def coerce(v):
        if isinstance(v, DiffOp):
            return v
        return DiffOp([v])

    # basic queries ------------------------------------------------------
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> RatFunc:
        return self.coeffs[-1] if self.coeffs else _RZERO

    def coeff(self, j) -> RatFunc:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else _RZERO

    def is_polynomial(self) -> bool:
        return all(c.is_poly() for c in self.coeffs)

    def polys(self):
        if not self.is_polynomial():
            raise ValueError("operator has non-polynomial coefficients")
        return [c.num for c in self.coeffs]

    def terms(self):
        """{(i, j): c} for polynomial coefficients."""
        out = {}
        for j, p in enumerate(self.polys()):
            for i, c in enumerate(p.coeffs):
                if c:
                    out[(i, j)] = c
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RatFunc, UniPoly)):
            other = DiffOp.coerce(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"DiffOp({self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = DiffOp.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for j, c in enumerate(b):
            out[j] = out[j] + c
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-DiffOp.coerce(other))

    def __rsub__(self, other):
        return DiffOp.coerce(other) - self

    def scale(self, f):
        """Left multiplication by a function or scalar."""
        if isinstance(f, (int, Fraction)):
            if not f:
                return DiffOp()
            return DiffOp([c * f for c in self.coeffs])
        f = RatFunc.coerce(f)
        return DiffOp([f * c for c in self.coeffs])

    def __mul__(self, other):
        """Composition self o other."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = DiffOp.coerce(other)
        return op_mul(self, other)

    def __rmul__(self, other):
        return DiffOp.coerce(other) * self

    def __pow__(self, n):
        out = DiffOp.const(1)
        for _ in range(n):
            out = out * self
        return out

    def apply(self, f):
        """Apply to a rational function."""
        f = RatFunc.coerce(f)
        acc = _RZERO
        d = f
        for j, c in enumerate(self.coeffs):
            if j:
                d = d.derivative()
            if c:
                acc = acc + c * d
        return acc

    # normal forms -------------------------------------------------------
    def normalized(self):
        """Polynomial coefficients, no common factor, leading coefficient of
        the top coefficient equal to 1."""
        if self.is_zero():
            return self
        den = UniPoly.const(1)
        for c in self.coeffs:
            if not c.den.is_one():
                den = poly_lcm(den, c.den)
        polys = [(c.num * den.exact_div(c.den)) if c else UniPoly() for c in self.coeffs]
        g = UniPoly()
        for p in polys:
            if p:
                g = poly_gcd(g, p)
                if g.degree() == 0:
                    break
        if g.degree() > 0:
            polys = [p // g for p in polys]
        lc = polys[-1].lc()
        return DiffOp([p * (1 / lc) for p in polys])

    def scalar_ratio(self, other):
        """c with self = c * other, or None."""
        if self.is_zero() or other.is_zero():
            return Fraction(1) if self.is_zero() and other.is_zero() else None
        if self.order() != other.order():
            return None
        r = self.lead() / other.lead()
        if not r.is_constant():
            return None
        c = r.num.coeff(0)
        return c if self == other.scale(c) else None

    def equals_up_to_scalar(self, other) -> bool:
        return self.scalar_ratio(other) is not None

    def same_up_to_function(self, other) -> bool:
        return self.normalized() == other.normalized()

    def to_str(self, var="x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            dpart = "" if j == 0 else ("D" if j == 1 else f"D^{j}")
            cs = c.to_str(var)
            if not dpart:
                parts.append(f"({cs})" if parts else cs)
            elif c == _RONE:
                parts.append(dpart)
            else:
                parts.append(f"({cs})*{dpart}")
        return " + ".join(parts)

    def to_json(self):
        return {
            "coeffs": [
                {"num": [str(v) for v in c.num.coeffs], "den": [str(v) for v in c.den.coeffs]}
                for c in self.coeffs
            ]
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            [RatFunc(UniPoly([Fraction(v) for v in c["num"]]), UniPoly([Fraction(v) for v in c["den"]]))
             for c in data["coeffs"]]
        )


def _derivs(f: RatFunc, k: int):
    out = [f]
    for _ in range(k):
        out.append(out[-1].derivative())
    return out


def op_mul(a: DiffOp, b: DiffOp) -> DiffOp:
    """(a_i D^i)(b_j D^j) = a_i sum_k C(i,k) b_j^(k) D^(i-k+j)."""
    if a.is_zero() or b.is_zero():
        return DiffOp()
    na = a.order()
    out = [_RZERO] * (na + b.order() + 1)
    for j, bj in enumerate(b.coeffs):
        if bj.is_zero():
            continue
        ders = _derivs(bj, na)
        for i, ai in enumerate(a.coeffs):
            if ai.is_zero():
                continue
            for k in range(i + 1):
                d = ders[k]
                if d.is_zero():
                    continue
                t = ai * d
                if k:
                    t = t * comb(i, k)
                out[i - k + j] = out[i - k + j] + t
    return DiffOp(out)


def op_right_divmod(a: DiffOp, b: DiffOp):
    """(q, r) with a = q o b + r and order(r) < order(b)."""
    if b.is_zero():
        raise DivisionByZero("right division by the zero operator")
    nb = b.order()
    inv_lead = b.lead().inverse()
    qc = [_RZERO] * max(a.order() - nb + 1, 0)
    r = a
    while not r.is_zero() and r.order() >= nb:
        k = r.order() - nb
        c = r.lead() * inv_lead
        qc[k] = qc[k] + c
        term = DiffOp([_RZERO] * k + [c])
        r2 = r - op_mul(term, b)
        if not r2.is_zero() and r2.order() >= r.order():
            raise ArithmeticError("leading term failed to cancel")
        r = r2
    return DiffOp(qc), r


def op_left_divmod(a: DiffOp, b: DiffOp):
    """(q, r) with a = b o q + r, via adjoints."""
    qs, rs = op_right_divmod(adjoint(a), adjoint(b))
    return adjoint(qs), adjoint(rs)


def op_right_exact(a: DiffOp, b: DiffOp) -> DiffOp:
    q, r = op_right_divmod(a, b)
    if not r.is_zero():
        raise NotDivisible("operator is not right-divisible")
    return q


def op_left_exact(a: DiffOp, b: DiffOp) -> DiffOp:
    q, r = op_left_divmod(a, b)
    if not r.is_zero():
        raise NotDivisible("operator is not left-divisible")
    return q


def _left_div_d_once(a: DiffOp):
    """b with D o b = a, or None."""
    n = a.order()
    if n < 1:
        return None
    b = [_RZERO] * n
    b[n - 1] = a.coeffs[n]
    for j in range(n - 1, 0, -1):
        b[j - 1] = a.coeffs[j] - b[j].derivative()
    if a.coeffs[0] != b[0].derivative():
        return None
    return DiffOp(b)


def op_left_divide_by_power_of_d(a: DiffOp, k: int) -> DiffOp:
    for _ in range(k):
        b = _left_div_d_once(a)
        if b is None:
            raise NotDivisible("operator is not left-divisible by D")
        a = b
    return a


def left_divide_d_maximally(a: DiffOp):
    """Divide by D from the left as often as possible; returns (b, count)."""
    count = 0
    while True:
        b = _left_div_d_once(a)
        if b is None or b.is_zero():
            return a, count
        a, count = b, count + 1


def adjoint(a: DiffOp) -> DiffOp:
    """sum (-1)^j D^j o p_j."""
    out = [_RZERO] * (a.order() + 1)
    for j, p in enumerate(a.coeffs):
        if p.is_zero():
            continue
        ders = _derivs(p, j)
        sign = -1 if j % 2 else 1
        for k in range(j + 1):
            d = ders[k]
            if d.is_zero():
                continue
            out[j - k] = out[j - k] + d * (sign * comb(j, k))
    return DiffOp(out)


# coordinate substitutions ---------------------------------------------------

def substitute_1mx(a: DiffOp) -> DiffOp:
    """x -> 1 - x, D -> -D."""
    return DiffOp([c.compose_1mx() * (-1 if j % 2 else 1) for j, c in enumerate(a.coeffs)])


def substitute_shift(a: DiffOp, c) -> DiffOp:
    """x -> x + c."""
    return DiffOp([f.shift(c) for f in a.coeffs])


def substitute_mobius(a: DiffOp, phi: RatFunc) -> DiffOp:
    """Pull back along x = phi(t), renamed t -> x.  D_x = (1/phi') D_t."""
    phi = RatFunc.coerce(phi)
    dx = DiffOp([_RZERO, phi.derivative().inverse()])
    out = DiffOp()
    power = DiffOp.const(1)
    for j, c in enumerate(a.coeffs):
        if j:
            power = dx * power
        if c:
            out = out + power.scale(c.compose(phi))
    return out


def substitute_inv(a: DiffOp) -> DiffOp:
    """x -> 1/x."""
    return substitute_mobius(a, RatFunc(UniPoly.const(1), UniPoly.x()))


# theta forms ----------------------------------------------------------------

@lru_cache(maxsize=None)
def falling(m: int) -> UniPoly:
    """th (th-1) ... (th-m+1)."""
    p = UniPoly.const(1)
    for t in range(m):
        p = p * UniPoly((-t, 1))
    return p


def to_falling_basis(p: UniPoly):
    """d with p(t) = sum d_m falling(m)(t), by forward differences."""
    n = p.degree()
    if n < 0:
        return []
    vals = [p(k) for k in range(n + 1)]
    out = []
    fact = 1
    for m in range(n + 1):
        if m:
            fact *= m
        out.append(vals[0] / fact)
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return out


@dataclass
class ThetaForm:
    parts: dict = field(default_factory=dict)

    @property
    def p(self):
        return max([k for k, v in self.parts.items() if v and k >= 0], default=0)

    @property
    def q(self):
        return max([-k for k, v in self.parts.items() if v and k <= 0], default=0)

    def part(self, k) -> UniPoly:
        return self.parts.get(k, UniPoly())

    def xparts(self):
        """P_{-q}, ..., P_{-1}."""
        return [self.part(k) for k in range(-self.q, 0)]

    def dparts(self):
        """P_0, ..., P_p."""
        return [self.part(k) for k in range(0, self.p + 1)]

    def __eq__(self, other):
        if not isinstance(other, ThetaForm):
            return NotImplemented
        keys = set(self.parts) | set(other.parts)
        return all(self.part(k) == other.part(k) for k in keys)

    def substitute(self, shift):
        return substitute_theta(self, shift)

    def to_op(self):
        return from_theta_form(self)

    def to_str(self) -> str:
        out = []
        for k in sorted(self.parts):
            p = self.parts[k]
            if not p:
                continue
            body = p.to_str("th")
            if k < 0:
                xs = "x" if k == -1 else f"x^{-k}"
                out.append(f"{xs}*({body})")
            elif k == 0:
                out.append(f"({body})")
            else:
                ds = "D" if k == 1 else f"D^{k}"
                out.append(f"({body})*{ds}")
        return " + ".join(out) if out else "0"

    def __str__(self):
        return self.to_str()


def to_theta_form(a: DiffOp) -> ThetaForm:
    parts = {}
    for (i, j), c in a.terms().items():
        k = j - i
        parts[k] = parts.get(k, UniPoly()) + falling(min(i, j)) * c
    return ThetaForm({k: v for k, v in parts.items() if v})


def from_theta_form(t: ThetaForm) -> DiffOp:
    terms = {}
    for k, p in t.parts.items():
        for m, d in enumerate(to_falling_basis(p)):
            if not d:
                continue
            key = (m - k, m) if k <= 0 else (m, m + k)
            terms[key] = terms.get(key, Fraction(0)) + d
    return DiffOp.from_terms(terms)


def substitute_theta(t: ThetaForm, shift) -> ThetaForm:
    """P_k(th) -> P_k(th - shift)."""
    shift = Q(shift)
    return ThetaForm({k: p.shift(-shift) for k, p in t.parts.items()})


def theta_poly(p: UniPoly) -> DiffOp:
    return from_theta_form(ThetaForm({0: p}))


# series ---------------------------------------------------------------------

POINTS = ("0", "1", "inf")


def norm_point(pt) -> str:
    s = str(pt).strip().lower()
    if s in ("inf", "infinity", "oo", "∞"):
        return "inf"
    if s in ("0", "1"):
        return s
    raise ValueError(f"unknown singular point {pt!r}")


@dataclass(frozen=True)
class Series:
    """x^rho * sum c_m x^m at 0 (t = 1 - x at 1; x^-rho sum c_m x^-m at inf)."""

    base_point: str
    exponent: Fraction
    coeffs: tuple

    @property
    def N(self):
        return len(self.coeffs) - 1

    def __add__(self, other):
        if self.base_point != other.base_point or self.exponent != other.exponent:
            raise ValueError("series with different bases")
        n = min(len(self.coeffs), len(other.coeffs))
        return Series(self.base_point, self.exponent, tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def scaled(self, c):
        return Series(self.base_point, self.exponent, tuple(c * v for v in self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def aligned(self, exponent):
        """Re-express with a lower leading exponent (pads with zeros)."""
        d = self.exponent - exponent
        if d.denominator != 1 or d < 0:
            raise ValueError("cannot align series exponents")
        pad = int(d)
        return Series(self.base_point, exponent, (Fraction(0),) * pad + self.coeffs[: len(self.coeffs) - pad])


def _local_op(a: DiffOp, pt: str) -> DiffOp:
    return substitute_1mx(a) if pt == "1" else a


def apply_to_series(a: DiffOp, u: Series) -> Series:
    """Formal expansion of a(u); all returned coefficients are exact."""
    if not a.is_polynomial():
        raise ValueError("series application needs polynomial coefficients")
    if len(u.coeffs) <= a.order():
        raise TruncationTooShort("series truncation must exceed the operator order")
    pt = u.base_point
    terms = _local_op(a, pt).terms()
    N = len(u.coeffs) - 1
    rho = u.exponent
    out = [Fraction(0)] * (N + 1)
    if pt in ("0", "1"):
        p = max(j - i for (i, j) in terms)
        for (i, j), c in terms.items():
            off = i - j + p
            for m in range(0, N + 1 - off):
                um = u.coeffs[m]
                if um:
                    out[m + off] += c * um * _falling_at(rho + m, j)
        return Series(pt, rho - p, tuple(out))
    q = max(i - j for (i, j) in terms)
    for (i, j), c in terms.items():
        off = q - (i - j)
        for m in range(0, N + 1 - off):
            um = u.coeffs[m]
            if um:
                out[m + off] += c * um * _falling_at(-rho - m, j)
    return Series(pt, rho - q, tuple(out))


def _falling_at(v, j):
    out = Fraction(1)
    for t in range(j):
        out *= v - t
    return out


# parsing --------------------------------------------------------------------

class _OpAlgebra:
    def number(self, n):
        return DiffOp.const(n)

    def symbol(self, name):
        if name == "x":
            return DiffOp.x()
        if name == "D":
            return DiffOp.D()
        if name == "th":
            return DiffOp.theta()
        return None

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b.order() != 0:
            raise ParseError("can only divide by a function")
        return a.scale(b.coeff(0).inverse())

    def power(self, a, n):
        if n < 0:
            if a.order() != 0:
                raise ParseError("negative power of a non-function")
            return DiffOp.function(a.coeff(0) ** n)
        return a ** n


def parse_op(text: str) -> DiffOp:
    from .parsing import parse_expression

    return parse_expression(text, _OpAlgebra())


def format_op(a: DiffOp, form="xD") -> str:
    if form == "theta":
        return to_theta_form(a.normalized() if not a.is_polynomial() else a).to_str()
    return a.to_str()


__all__ = [
    "DiffOp", "ThetaForm", "Series", "op_mul", "op_right_divmod", "op_left_divmod",
    "op_right_exact", "op_left_exact", "op_left_divide_by_power_of_d", "left_divide_d_maximally",
    "adjoint", "to_theta_form", "from_theta_form", "substitute_theta", "theta_poly",
    "apply_to_series", "parse_op", "format_op", "substitute_1mx", "substitute_inv",
    "substitute_mobius", "substitute_shift", "falling", "fmt_q",
]
