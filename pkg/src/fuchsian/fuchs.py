"""Local exponents, Riemann schemes, spectral types and Frobenius series."""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .arith import Q, RatFunc, UniPoly, fmt_q, rational_roots
from .errors import IrregularSingularity, ResonanceObstruction
from .weyl import (
    DiffOp,
    Series,
    _falling_at,
    falling,
    norm_point,
    substitute_1mx,
    to_theta_form,
)


def _poly_op(a: DiffOp) -> DiffOp:
    return a if a.is_polynomial() else a.normalized()


def indicial_polynomial(a: DiffOp, point) -> UniPoly:
    """Indicial polynomial in rho (not normalized)."""
    pt = norm_point(point)
    a = _poly_op(a)
    if pt == "1":
        a = substitute_1mx(a)
    t = to_theta_form(a)
    keys = [k for k, v in t.parts.items() if v]
    rho = UniPoly.x()
    if pt in ("0", "1"):
        k = max(keys)
        lo = max(k, 0)
        ind = falling(lo) * t.parts[k](rho - lo)
    else:
        k = min(keys)
        lo = max(k, 0)
        ind = falling(lo)(-rho) * t.parts[k](-rho - lo)
    if ind.degree() != a.order():
        raise IrregularSingularity(f"indicial degree {ind.degree()} < order {a.order()} at {pt}")
    return ind


@dataclass(frozen=True)
class Exponents:
    roots: tuple
    indicial: UniPoly
    unresolved: UniPoly

    def as_list(self):
        if self.unresolved.degree() > 0:
            raise ValueError(f"non-rational exponents: roots of {self.unresolved}")
        return list(self.roots)


def local_exponents(a: DiffOp, point) -> Exponents:
    ind = indicial_polynomial(a, point)
    roots, rest = rational_roots(ind)
    multiset = []
    for r in sorted(roots):
        multiset.extend([r] * roots[r])
    return Exponents(tuple(multiset), ind.monic(), rest)


@dataclass(frozen=True)
class RiemannScheme:
    at0: tuple
    at1: tuple
    atinf: tuple

    @classmethod
    def of(cls, at0, at1, atinf):
        return cls(*(tuple(sorted(Q(v) for v in col)) for col in (at0, at1, atinf)))

    def columns(self):
        return (self.at0, self.at1, self.atinf)

    def total(self):
        return sum(self.at0) + sum(self.at1) + sum(self.atinf)

    def order(self):
        return len(self.at0)

    def __eq__(self, other):
        if not isinstance(other, RiemannScheme):
            return NotImplemented
        return all(Counter(a) == Counter(b) for a, b in zip(self.columns(), other.columns()))

    def __hash__(self):
        return hash(tuple(tuple(sorted(c)) for c in self.columns()))

    def to_str(self):
        cols = [["x=0"] + [fmt_q(v) for v in self.at0],
                ["x=1"] + [fmt_q(v) for v in self.at1],
                ["x=inf"] + [fmt_q(v) for v in self.atinf]]
        w = max(len(s) for c in cols for s in c)
        return "\n".join(" ".join(s.rjust(w) for s in row) for row in cols)

    def __str__(self):
        return self.to_str()

    def to_json(self):
        return {"0": [fmt_q(v) for v in self.at0], "1": [fmt_q(v) for v in self.at1],
                "inf": [fmt_q(v) for v in self.atinf]}

    def spectral_type(self):
        return tuple(partition_mod1(c) for c in self.columns())

    def shifted(self, d0, d1):
        """Scheme after multiplying solutions by x^d0 (x-1)^d1."""
        return RiemannScheme.of([v + d0 for v in self.at0], [v + d1 for v in self.at1],
                                [v - d0 - d1 for v in self.atinf])


def riemann_scheme(a: DiffOp) -> RiemannScheme:
    return RiemannScheme.of(*(local_exponents(a, p).as_list() for p in ("0", "1", "inf")))


def check_fuchs_relation(rs: RiemannScheme, n: int, m: int = 3) -> bool:
    return rs.total() == Fraction(n * (n - 1) * (m - 2), 2)


def partition_mod1(col):
    """Sizes of the classes of exponents modulo integers, largest first."""
    classes = Counter(v - (v.numerator // v.denominator) for v in col)
    return tuple(sorted(classes.values(), reverse=True))


def spectral_type(a: DiffOp):
    return riemann_scheme(a).spectral_type()


def parse_partition(s):
    if isinstance(s, str):
        return tuple(int(c) for c in s)
    return tuple(s)


def accessory_count(types, n: int, m: int = 3) -> int:
    sq = sum(k * k for t in types for k in parse_partition(t))
    twice = (m - 2) * n * n - sq + 2
    if twice % 2:
        raise ValueError("odd accessory count; partitions inconsistent")
    return twice // 2


def frobenius_series(a: DiffOp, point, rho, N: int = 16) -> Series:
    """Normalized truncated solution x^rho(1 + u_1 x + ...) at the point."""
    pt = norm_point(point)
    rho = Q(rho)
    a = _poly_op(a)
    terms = (substitute_1mx(a) if pt == "1" else a).terms()
    at_inf = pt == "inf"
    if at_inf:
        top = max(i - j for (i, j) in terms)
        offs = [((i, j), c, top - (i - j)) for (i, j), c in terms.items()]
        arg = lambda m: -rho - m  # noqa: E731
    else:
        top = max(j - i for (i, j) in terms)
        offs = [((i, j), c, i - j + top) for (i, j), c in terms.items()]
        arg = lambda m: rho + m  # noqa: E731
    lead = [(j, c) for (i, j), c, off in offs if off == 0]
    f0 = sum((c * _falling_at(arg(0), j) for j, c in lead), Fraction(0))
    if f0:
        raise ValueError(f"{rho} is not a local exponent at {pt}")
    u = [Fraction(1)]
    for M in range(1, N + 1):
        rhs = Fraction(0)
        for (i, j), c, off in offs:
            if off == 0 or off > M:
                continue
            m = M - off
            if u[m]:
                rhs += c * u[m] * _falling_at(arg(m), j)
        fM = sum((c * _falling_at(arg(M), j) for j, c in lead), Fraction(0))
        if fM:
            u.append(-rhs / fM)
        elif rhs:
            raise ResonanceObstruction(f"logarithmic term at {pt}, exponent {rho}, step {M}")
        else:
            u.append(Fraction(0))
    return Series(pt, rho, tuple(u))


def no_log_check(a: DiffOp, point, block=None) -> bool:
    """True when every exponent of the block carries a Frobenius series."""
    pt = norm_point(point)
    exps = local_exponents(a, pt)
    allexp = list(exps.roots)
    block = allexp if block is None else [Q(v) for v in block]
    counts = Counter(allexp)
    for r in block:
        if counts.get(r, 0) != 1:
            return False
    span = 1
    for r in allexp:
        for t in allexp:
            d = t - r
            if d.denominator == 1 and d > 0:
                span = max(span, int(d))
    for r in block:
        try:
            frobenius_series(a, pt, r, N=span + 1)
        except ResonanceObstruction:
            return False
    if pt in ("0", "1"):
        ints = sorted(r for r in block if r.denominator == 1 and r >= 0)
        if ints and ints == list(range(len(ints))):
            return divisibility_pattern_ok(a, pt, len(ints) - 1)
    return True


def _valuation(f: RatFunc) -> int:
    return f.num.valuation() - f.den.valuation()


def divisibility_pattern_ok(a: DiffOp, point, r: int) -> bool:
    """Exponents 0..r free of logs: with P = sum x^j p_j D^j normalized by
    p_n = 1, ord_0 p_j >= r + 1 - j for j <= r."""
    pt = norm_point(point)
    a = _poly_op(a)
    if pt == "1":
        a = substitute_1mx(a)
    n = a.order()
    cn = a.lead()
    for j in range(min(r, n - 1) + 1):
        cj = a.coeff(j)
        if cj.is_zero():
            continue
        v = _valuation(cj) + (n - j) - _valuation(cn)
        if v < r + 1 - j:
            return False
    return True


def infinity_recurrence_polys(a: DiffOp):
    """(f, g, h): coefficients of x^-rho, x^-rho-1, x^-rho-2 in a(x^-rho)."""
    terms = _poly_op(a).terms()
    top = max(i - j for (i, j) in terms)
    rho = UniPoly.x()
    out = [UniPoly(), UniPoly(), UniPoly()]
    for (i, j), c in terms.items():
        d = top - (i - j)
        if d <= 2:
            out[d] = out[d] + falling(j)(-rho) * c
    return tuple(out)


def block_sums(e, blocks=((0, 3), (3, 6), (6, 9))):
    return [sum(e[a:b], Fraction(0)) for a, b in blocks]


@dataclass(frozen=True)
class ExponentSet:
    """e_1..e_9 of H6 with derived symmetric functions (1-based names)."""

    e: tuple

    @classmethod
    def of(cls, values):
        if isinstance(values, ExponentSet):
            return values
        vals = tuple(Q(v) for v in values)
        return cls(vals)

    def __getitem__(self, i):
        return self.e[i - 1]

    def __len__(self):
        return len(self.e)

    def __iter__(self):
        return iter(self.e)

    def block(self, i):
        return self.e[3 * (i - 1): 3 * i]

    @property
    def s(self):
        return (6 - sum(self.e)) / 3

    @property
    def r(self):
        return -self.s

    def s1(self, i):
        a, b, c = self.block(i)
        return a + b + c

    def s2(self, i):
        a, b, c = self.block(i)
        return a * b + a * c + b * c

    def s3(self, i):
        a, b, c = self.block(i)
        return a * b * c

    def t2(self, i):
        return self.s2(i) - self.s1(i) ** 2 / 3

    def t3(self, i):
        return 2 * self.s1(i) ** 3 / 27 - self.s1(i) * self.s2(i) / 3 + self.s3(i)

    def shifted(self, offsets):
        return ExponentSet(tuple(v + d for v, d in zip(self.e, offsets)))

    def replace(self, **kw):
        vals = list(self.e)
        for k, v in kw.items():
            vals[int(k[1:]) - 1] = Q(v)
        return ExponentSet(tuple(vals))

    def to_list(self):
        return [fmt_q(v) for v in self.e]
