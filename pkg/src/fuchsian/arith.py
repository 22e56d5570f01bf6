"""Exact scalars, dense univariate polynomials and rational functions over Q.

Scalars are ``fractions.Fraction``.  ``UniPoly`` stores coefficients low to
high degree; ``RatFunc`` keeps a coprime numerator/denominator pair with a
monic denominator, so equality is plain component comparison.
"""

from fractions import Fraction
from math import gcd, lcm

from .errors import DivisionByZero

BigRat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def Q(v) -> Fraction:
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    if isinstance(v, UniPoly) and v.degree() <= 0:
        return v.coeff(0)
    if isinstance(v, RatFunc) and v.is_constant():
        return v.num.coeff(0)
    raise TypeError(f"cannot coerce {v!r} to a rational")


def fmt_q(v) -> str:
    v = Q(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class UniPoly:
    """Dense polynomial; ``coeffs[i]`` is the coefficient of var**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [v if isinstance(v, Fraction) else Q(v) for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs):
        # caller guarantees Fractions with nonzero top coefficient
        p = cls.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def x(cls):
        return cls._raw((_ZERO, _ONE))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, deg, c=1):
        return cls([0] * deg + [c])

    @classmethod
    def from_roots(cls, roots, lead=1):
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-Q(r), 1))
        return p

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (_ONE,)

    def coeff(self, i) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    @staticmethod
    def _coerce(v):
        if isinstance(v, UniPoly):
            return v
        return UniPoly.const(v)

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw(tuple(-v for v in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return NotImplemented
        if not isinstance(other, UniPoly):
            c = Q(other)
            if not c:
                return UniPoly()
            return UniPoly._raw(tuple(v * c for v in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    out[i + j] += u * v
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = UniPoly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree()
        if len(r) - 1 < db:
            return UniPoly(), self
        inv = 1 / other.lc()
        b = other.coeffs
        q = [_ZERO] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            c = r[k + db] * inv
            q[k] = c
            if c:
                for i, v in enumerate(b):
                    r[k + i] -= c * v
        return UniPoly(q), UniPoly(r[:db])

    __divmod__ = divmod

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if r:
            from .errors import NotDivisible
            raise NotDivisible(f"{other} does not divide {self}")
        return q

    def __call__(self, t):
        """Horner evaluation; works for scalars, UniPoly and RatFunc."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * t + c
        if acc is None:
            return _ZERO if isinstance(t, (int, Fraction)) else t * 0
        if not isinstance(t, (int, Fraction)) and isinstance(acc, Fraction):
            return t * 0 + acc
        return acc

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, c):
        """p(x + c) via Taylor shift."""
        c = Q(c)
        if not c or len(self.coeffs) < 2:
            return self
        a = list(self.coeffs)
        n = len(a)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] += c * a[j + 1]
        return UniPoly(a)

    def compose_1mx(self):
        """p(1 - x)."""
        return self.reflect().shift(-1)

    def reflect(self):
        """p(-x)."""
        return UniPoly._raw(tuple(v if i % 2 == 0 else -v for i, v in enumerate(self.coeffs)))

    def scale_var(self, c):
        """p(c*x)."""
        c = Q(c)
        out, pw = [], _ONE
        for v in self.coeffs:
            out.append(v * pw)
            pw *= c
        return UniPoly(out)

    def compose(self, q):
        return self(q)

    def monic(self):
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return UniPoly._raw(tuple(v / lc for v in self.coeffs))

    def content_int(self):
        """Primitive integer coefficient list (positive leading coefficient)."""
        return _int_primitive(self.coeffs)

    def gcd(self, other):
        return poly_gcd(self, other)

    def valuation(self) -> int:
        """Order of vanishing at 0 (inf-like large number for zero)."""
        for i, v in enumerate(self.coeffs):
            if v:
                return i
        return 10 ** 9

    def to_str(self, var="x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            neg = c < 0
            a = -c if neg else c
            mono = var if i == 1 else f"{var}^{i}"
            if i == 0:
                body = fmt_q(a)
            elif a == 1:
                body = mono
            else:
                body = f"{fmt_q(a)}*{mono}"
            parts.append((neg, body))
        return _join_terms(parts)


def _join_terms(parts):
    out = ""
    for k, (neg, body) in enumerate(parts):
        if k == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def _int_primitive(coeffs):
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [c.numerator * (den // c.denominator) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    if ints and ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def _strip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _prem(a, b):
    r = list(a)
    n = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= n and r:
        k = len(r) - 1 - n
        lr = r[-1]
        r = [v * lb for v in r]
        for i, bv in enumerate(b):
            r[i + k] -= lr * bv
        r.pop()
        _strip(r)
    return r


def _prim(a):
    g = 0
    for v in a:
        g = gcd(g, v)
    if g > 1:
        a = [v // g for v in a]
    if a and a[-1] < 0:
        a = [-v for v in a]
    return a


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd via the primitive Euclidean remainder sequence over Z."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree() == 0 or b.degree() == 0:
        return UniPoly.const(1)
    x, y = _int_primitive(a.coeffs), _int_primitive(b.coeffs)
    if len(x) <= 3 and len(y) <= 3:
        if len(x) < len(y):
            x, y = y, x
        while y:
            r = _prem(x, y)
            x, y = y, _prim(r)
        return UniPoly(x).monic()
    # coefficient growth makes the pure remainder sequence slow; sympy's
    # heuristic integer gcd is much faster on large inputs
    from sympy.polys.domains import ZZ
    from sympy.polys.euclidtools import dup_gcd

    g = dup_gcd([ZZ(v) for v in reversed(x)], [ZZ(v) for v in reversed(y)], ZZ)
    return UniPoly([Fraction(int(v)) for v in reversed(g)]).monic()


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() or b.is_zero():
        return UniPoly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def squarefree_decomposition(p: UniPoly):
    """Yun's algorithm: list of (factor, multiplicity), factors monic."""
    if p.degree() <= 0:
        return []
    p = p.monic()
    out = []
    a0 = p
    b = a0.derivative()
    g = poly_gcd(a0, b)
    c = a0 // g
    d = b // g - c.derivative()
    i = 1
    while c.degree() > 0:
        a = poly_gcd(c, d)
        c = c // a
        d = d // a - c.derivative()
        if a.degree() > 0:
            out.append((a.monic(), i))
        i += 1
    return out


def rational_roots(p: UniPoly):
    """Rational roots with multiplicity, plus the leftover non-linear part.

    Returns ``(roots, rest)`` where ``roots`` maps Fraction -> multiplicity
    and ``rest`` is the monic product of irreducible factors of degree > 1.
    Factoring over Z is delegated to sympy.
    """
    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    roots = {}
    rest = UniPoly.const(1)
    for f, m in squarefree_decomposition(p):
        for r in _squarefree_rational_roots(f):
            roots[r] = roots.get(r, 0) + m
        lin = UniPoly.from_roots([r for r in _squarefree_rational_roots(f)])
        left = f.exact_div(lin)
        if left.degree() > 0:
            rest = rest * left ** m
    return roots, rest.monic()


def _squarefree_rational_roots(f: UniPoly):
    if f.degree() == 1:
        return [-f.coeff(0) / f.coeff(1)]
    ints = _int_primitive(f.coeffs)
    # x | f is common (exponent 0); strip it before factoring
    out = []
    k = 0
    while k < len(ints) and ints[k] == 0:
        k += 1
    if k:
        out.append(_ZERO)
        ints = ints[k:]
    if len(ints) <= 1:
        return out
    if len(ints) == 2:
        return out + [Fraction(-ints[0], ints[1])]
    import sympy

    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(ints)), t, domain="ZZ")
    _, facs = poly.factor_list()
    for fac, _m in facs:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            out.append(Fraction(-int(b), int(a)))
    return out


class RatFunc:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, UniPoly) else UniPoly.const(num)
        if den is None:
            self.num, self.den = num, _POLY_ONE
            return
        den = den if isinstance(den, UniPoly) else UniPoly.const(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, _POLY_ONE
            return
        if den.degree() > 0:
            g = poly_gcd(num, den)
            if g.degree() > 0:
                num, den = num // g, den // g
        lc = den.lc()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num, den):
        f = cls.__new__(cls)
        f.num, f.den = num, den
        return f

    @classmethod
    def x(cls):
        return cls._raw(UniPoly.x(), _POLY_ONE)

    @classmethod
    def const(cls, c):
        return cls._raw(UniPoly.const(c), _POLY_ONE)

    @staticmethod
    def coerce(v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, UniPoly):
            return RatFunc._raw(v, _POLY_ONE)
        return RatFunc._raw(UniPoly.const(v), _POLY_ONE)

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.is_one()

    def is_constant(self):
        return self.den.is_one() and self.num.degree() <= 0

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, UniPoly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    def __add__(self, other):
        other = RatFunc.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatFunc._raw(self.num + other.num, _POLY_ONE)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc._raw(UniPoly(), _POLY_ONE)
            return RatFunc._raw(self.num * other, self.den)
        other = RatFunc.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatFunc._raw(self.num * other.num, _POLY_ONE)
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, other.den) if other.den.degree() > 0 else None
        g2 = poly_gcd(other.num, self.den) if self.den.degree() > 0 else None
        n1, d2 = self.num, other.den
        n2, d1 = other.num, self.den
        if g1 is not None and g1.degree() > 0:
            n1, d2 = n1 // g1, d2 // g1
        if g2 is not None and g2.degree() > 0:
            n2, d1 = n2 // g2, d1 // g2
        num, den = n1 * n2, d1 * d2
        if num.is_zero():
            return RatFunc._raw(num, _POLY_ONE)
        lc = den.lc()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise DivisionByZero("division by zero")
            return RatFunc._raw(self.num * (1 / Fraction(other)), self.den)
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, self.den ** n) if n else RatFunc.const(1)

    def derivative(self):
        if self.den.is_one():
            return RatFunc._raw(self.num.derivative(), _POLY_ONE)
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, t):
        t = Q(t)
        d = self.den(t)
        if not d:
            raise DivisionByZero(f"pole at {t}")
        return self.num(t) / d

    def evaluate(self, t):
        return self(t)

    def compose(self, g):
        """self(g) for a RatFunc g."""
        g = RatFunc.coerce(g)
        return _poly_at(self.num, g) / _poly_at(self.den, g)

    def shift(self, c):
        return RatFunc(self.num.shift(c), self.den.shift(c))

    def compose_1mx(self):
        return RatFunc(self.num.compose_1mx(), self.den.compose_1mx())

    def to_str(self, var="x") -> str:
        if self.den.is_one():
            return self.num.to_str(var)
        return f"({self.num.to_str(var)})/({self.den.to_str(var)})"


def _poly_at(p: UniPoly, g: RatFunc) -> RatFunc:
    acc = RatFunc.const(0)
    for c in reversed(p.coeffs):
        acc = acc * g + c
    return acc


_POLY_ONE = UniPoly._raw((_ONE,))


def parse_poly(text: str, var="x") -> UniPoly:
    f = parse_ratfunc(text, var)
    if not f.is_poly():
        from .errors import ParseError
        raise ParseError(f"not a polynomial: {text!r}")
    return f.num


def parse_ratfunc(text: str, var="x") -> RatFunc:
    from .parsing import parse_expression

    return parse_expression(text, _RatAlgebra(var))


class _RatAlgebra:
    def __init__(self, var):
        self.var = var

    def number(self, n):
        return RatFunc.const(n)

    def symbol(self, name):
        if name == self.var:
            return RatFunc.x()
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
        return a / b

    def power(self, a, n):
        return a ** n
