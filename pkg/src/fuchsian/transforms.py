"""Addition, middle convolution, coordinate changes and the pipelines that
connect H3 with H4, H5 and H6."""

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Q, RatFunc, fmt_q
from .catalog import NamedOperator, recognize
from .errors import NotDivisible
from .fuchs import ExponentSet, RiemannScheme, riemann_scheme
from .weyl import (
    DiffOp,
    from_theta_form,
    left_divide_d_maximally,
    substitute_1mx,
    substitute_inv,
    substitute_mobius,
    substitute_theta,
    to_theta_form,
)

_X = RatFunc.x()


@dataclass(frozen=True)
class GaugeFactor:
    """x^g0 (x-1)^g1."""

    g0: Fraction = Fraction(0)
    g1: Fraction = Fraction(0)

    @classmethod
    def of(cls, g0=0, g1=0):
        return cls(Q(g0), Q(g1))

    def log_derivative(self) -> RatFunc:
        return RatFunc.const(self.g0) / _X + RatFunc.const(self.g1) / (_X - 1)

    def inverse(self):
        return GaugeFactor(-self.g0, -self.g1)

    def is_trivial(self):
        return not self.g0 and not self.g1


def _twist(a: DiffOp, g: RatFunc) -> DiffOp:
    """sum c_j (D + g)^j."""
    step = DiffOp([g, 1])
    out = DiffOp()
    power = DiffOp.const(1)
    for j, c in enumerate(a.coeffs):
        if j:
            power = step * power
        if c:
            out = out + power.scale(c)
    return out


def conjugate(a: DiffOp, f: GaugeFactor) -> DiffOp:
    """f^-1 o a o f, not normalized."""
    return a if f.is_trivial() else _twist(a, f.log_derivative())


def addition(a: DiffOp, f: GaugeFactor, normalize=True) -> DiffOp:
    """Ad(f) a = f o a o f^-1; solutions get multiplied by f."""
    out = conjugate(a, f.inverse())
    return out.normalized() if normalize else out


def _polynomial(a: DiffOp) -> DiffOp:
    return a if a.is_polynomial() else a.normalized()


def theta_reach(a: DiffOp) -> int:
    """Smallest k such that D^k a has a (theta, D)-form."""
    return to_theta_form(_polynomial(a)).q


def middle_convolution_k(a: DiffOp, mu, k: int) -> DiffOp:
    a = _polynomial(a)
    b = DiffOp.D(k) * a if k else a
    t = to_theta_form(b)
    if t.q:
        raise ValueError(f"D^{k} a has no (theta, D)-form")
    c = from_theta_form(substitute_theta(t, mu))
    out, _ = left_divide_d_maximally(c)
    return out


def middle_convolution(a: DiffOp, mu, k=None, check=True) -> DiffOp:
    """mc_mu(a): multiply by D^k, replace th by th - mu, divide by D from the left."""
    mu = Q(mu)
    if k is None:
        k = theta_reach(a)
    out = middle_convolution_k(a, mu, k)
    if check:
        again = middle_convolution_k(a, mu, k + 1)
        if not again.normalized() == out.normalized():
            raise ArithmeticError("middle convolution depends on k")
    return out


def mc_order_drop(scheme: RiemannScheme, mu) -> int:
    """d with order(mc_mu(P)) = order(P) - d."""
    mu = Q(mu)

    def mult(col, v):
        return sum(1 for c in col if (c - v).denominator == 1)

    return mult(scheme.at0, 0) + mult(scheme.at1, 0) + mult(scheme.atinf, mu) - scheme.order()


def coordinate_change_1mx(a: DiffOp) -> DiffOp:
    return substitute_1mx(a)


def coordinate_change_inv(a: DiffOp, conj_power=0) -> DiffOp:
    """(a|_{x -> 1/x}) o x^c, rescaled to polynomial coefficients."""
    b = substitute_inv(a)
    c = Q(conj_power)
    if c:
        b = conjugate(b, GaugeFactor(c, Fraction(0)))
    return b.normalized()


# the six Moebius maps permuting {0, 1, inf}
MOBIUS = {
    "x": RatFunc.x(),
    "1-x": 1 - _X,
    "1/x": RatFunc.const(1) / _X,
    "1/(1-x)": RatFunc.const(1) / (1 - _X),
    "x/(x-1)": _X / (_X - 1),
    "(x-1)/x": (_X - 1) / _X,
}

# where the images of 0, 1, inf under pullback end up: point p of the new
# operator carries the exponents of point PERM[name][p] of the old one
MOBIUS_PERM = {
    "x": {"0": "0", "1": "1", "inf": "inf"},
    "1-x": {"0": "1", "1": "0", "inf": "inf"},
    "1/x": {"0": "inf", "1": "1", "inf": "0"},
    "1/(1-x)": {"0": "1", "1": "inf", "inf": "0"},
    "x/(x-1)": {"0": "0", "1": "inf", "inf": "1"},
    "(x-1)/x": {"0": "inf", "1": "0", "inf": "1"},
}


def coordinate_permutation(a: DiffOp, name: str) -> DiffOp:
    return substitute_mobius(a, MOBIUS[name]).normalized()


# ---------------------------------------------------------------- renaming

@dataclass
class RenamingMap:
    """Each target label is an affine combination of source labels.

    ``rules[target] = {source_label: coefficient, "1": constant}``."""

    source: tuple
    target: tuple
    rules: dict = field(default_factory=dict)

    def apply(self, values: dict) -> dict:
        out = {}
        for t in self.target:
            acc = Fraction(0)
            for k, c in self.rules[t].items():
                acc += c * (1 if k == "1" else values[k])
            out[t] = acc
        return out

    def matrix(self):
        return [[self.rules[t].get(s, Fraction(0)) for s in self.source] for t in self.target]

    def is_invertible(self) -> bool:
        from .linalg import rank

        m = self.matrix()
        return len(self.source) == len(self.target) and rank(m, len(self.source)) == len(self.source)

    def to_json(self):
        def term(rule):
            parts = []
            for k, c in rule.items():
                if not c:
                    continue
                if k == "1":
                    parts.append(fmt_q(c))
                elif c == 1:
                    parts.append(k)
                else:
                    parts.append(f"{fmt_q(c)}*{k}")
            return " + ".join(parts) if parts else "0"

        return {t: term(self.rules[t]) for t in self.target}


def _rule(**kw):
    return {k: Q(v) for k, v in kw.items()}


def _with_const(rule, c):
    out = dict(rule)
    out["1"] = out.get("1", Fraction(0)) + Q(c)
    return out


@dataclass
class PipelineResult:
    result: NamedOperator
    renaming: RenamingMap
    stages: list

    def to_json(self):
        return {
            "result": self.result.label(),
            "renaming": self.renaming.to_json(),
            "stages": [{"name": n, "order": op.order(), "scheme": rs.to_json()}
                       for n, op, rs in self.stages],
        }


def _stage(name, op):
    return (name, op, riemann_scheme(op))


def _b_values(h3: NamedOperator):
    b = list(h3.params)
    b.append(3 - sum(b))
    return {f"b{i + 1}": v for i, v in enumerate(b)}


def pipeline_H3_to_H6(h3: NamedOperator, g0, g1, u) -> PipelineResult:
    g0, g1, u = Q(g0), Q(g1), Q(u)
    x = RatFunc.x()
    L = addition(h3.op, GaugeFactor(g0, g1), normalize=False)
    L = L.scale(L.lead().inverse() * (x ** 3) * (x - 1) ** 3)
    stages = [_stage("H3", h3.op), _stage("x(x-1)Ad(f)H3", L)]
    M = middle_convolution(L, u)
    stages.append(_stage(f"mc_{fmt_q(u)}", M))
    src = ("b1", "b2", "b3", "b4", "b5", "b6", "g0", "g1", "u")
    rules = {
        "e1": _rule(g0=1, u=1), "e2": _rule(b1=1, g0=1, u=1), "e3": _rule(b2=1, g0=1, u=1),
        "e4": _rule(g1=1, u=1), "e5": _rule(b3=1, g1=1, u=1), "e6": _rule(b4=1, g1=1, u=1),
        "e7": _rule(b5=1, g0=-1, g1=-1, u=-1), "e8": _rule(b6=1, g0=-1, g1=-1, u=-1),
        # b7 = 3 - b1 - ... - b6
        "e9": _with_const(_rule(b1=-1, b2=-1, b3=-1, b4=-1, b5=-1, b6=-1, g0=-1, g1=-1, u=-1), 3),
    }
    ren = RenamingMap(src, tuple(f"e{i}" for i in range(1, 10)), rules)
    vals = dict(_b_values(h3), g0=g0, g1=g1, u=u)
    ev = ren.apply(vals)
    e = ExponentSet(tuple(ev[f"e{i}"] for i in range(1, 10)))
    res = recognize(M, "H6", e.e)
    return PipelineResult(res, ren, stages)


def pipeline_H3_to_H5(h3: NamedOperator, g1, u) -> PipelineResult:
    g1, u = Q(g1), Q(u)
    x = RatFunc.x()
    L = addition(h3.op, GaugeFactor(Fraction(0), g1), normalize=False)
    L = L.scale(L.lead().inverse() * (x ** 2) * (x - 1) ** 3)
    stages = [_stage("H3", h3.op), _stage("(x-1)Ad((x-1)^g1)H3", L)]
    M = middle_convolution(L, u)
    stages.append(_stage(f"mc_{fmt_q(u)}", M))
    N = coordinate_change_inv(M)
    stages.append(_stage("x->1/x", N))
    N = addition(N, GaugeFactor(u - 1, Fraction(0)))
    stages.append(_stage("Ad(x^(u-1))", N))
    src = ("b1", "b2", "b3", "b4", "b5", "b6", "g1", "u")
    rules = {
        "e1": _rule(b6=1, g1=-1), "e2": _rule(b5=1, g1=-1),
        "e3": _with_const(_rule(b1=-1, b2=-1, b3=-1, b4=-1, b5=-1, b6=-1, g1=-1), 3),
        "e4": _with_const(_rule(g1=1, u=1), 1), "e5": _with_const(_rule(b4=1, g1=1, u=1), 1),
        "e6": _with_const(_rule(b3=1, g1=1, u=1), 1),
        "e7": _rule(b2=1), "e8": _rule(b1=1),
    }
    ren = RenamingMap(src, tuple(f"e{i}" for i in range(1, 9)), rules)
    ev = ren.apply(dict(_b_values(h3), g1=g1, u=u))
    res = recognize(N, "H5", tuple(ev[f"e{i}"] for i in range(1, 9)))
    return PipelineResult(res, ren, stages)


def pipeline_H3_to_H4(h3: NamedOperator, u) -> PipelineResult:
    u = Q(u)
    stages = [_stage("H3", h3.op)]
    M = middle_convolution(h3.op, u)
    stages.append(_stage(f"mc_{fmt_q(u)}", M))
    src = ("b1", "b2", "b3", "b4", "b5", "b6", "u")
    rules = {
        "c1": _rule(b1=1, u=1), "c2": _rule(b2=1, u=1), "c3": _rule(b3=1, u=1),
        "c4": _rule(b4=1, u=1), "c5": _rule(b5=1, u=-1), "c6": _rule(b6=1, u=-1),
        "c7": _with_const(_rule(b1=-1, b2=-1, b3=-1, b4=-1, b5=-1, b6=-1, u=-1), 3),
    }
    ren = RenamingMap(src, tuple(f"c{i}" for i in range(1, 8)), rules)
    ev = ren.apply(dict(_b_values(h3), u=u))
    res = recognize(M, "H4", tuple(ev[f"c{i}"] for i in range(1, 8)))
    return PipelineResult(res, ren, stages)


def _to_h3(op: DiffOp, k0, k1):
    """Ad(x^-k0 (x-1)^-k1), normalized to leading x^2 (x-1)^2."""
    return addition(op, GaugeFactor(-Q(k0), -Q(k1)))


def pipeline_H6_to_H3(h6: NamedOperator) -> PipelineResult:
    e = ExponentSet(h6.params)
    t = e.s - 1
    stages = [_stage("H6", h6.op)]
    c = from_theta_form(substitute_theta(to_theta_form(h6.op), t))
    M, count = left_divide_d_maximally(c)
    if count < 3:
        raise NotDivisible(f"H6(th - t) only divisible by D^{count}")
    stages.append(_stage(f"mc_{fmt_q(t)}", M))
    N = _to_h3(M, e[1] + t, e[4] + t)
    stages.append(_stage("Ad", N))
    src = tuple(f"e{i}" for i in range(1, 10))
    # t = s - 1 = 1 - (e1 + ... + e9)/3
    tt = {f"e{i}": Fraction(-1, 3) for i in range(1, 10)}

    def plus_t(rule):
        out = dict(rule)
        for k, v in tt.items():
            out[k] = out.get(k, Fraction(0)) + v
        return _with_const(out, 1)

    rules = {
        "eps1": _rule(e2=1, e1=-1), "eps2": _rule(e3=1, e1=-1),
        "eps3": _rule(e5=1, e4=-1), "eps4": _rule(e6=1, e4=-1),
        "eps5": plus_t(_rule(e1=1, e4=1, e7=1)), "eps6": plus_t(_rule(e1=1, e4=1, e8=1)),
    }
    ren = RenamingMap(src, tuple(f"eps{i}" for i in range(1, 7)), rules)
    ev = ren.apply({f"e{i}": e[i] for i in range(1, 10)})
    res = recognize(N, "H3", tuple(ev[f"eps{i}"] for i in range(1, 7)))
    return PipelineResult(res, ren, stages)


def pipeline_H6_to_H5(h6: NamedOperator) -> PipelineResult:
    e = ExponentSet(h6.params)
    stages = [_stage("H6", h6.op)]
    c = from_theta_form(substitute_theta(to_theta_form(h6.op), e[9] - 1))
    M, count = left_divide_d_maximally(c)
    if count < 1:
        raise NotDivisible("H6(th - e9 + 1) is not divisible by D")
    stages.append(_stage(f"mc_{fmt_q(e[9] - 1)}", M))
    src = tuple(f"e{i}" for i in range(1, 10))
    rules = {f"eps{i}": _rule(**{f"e{i}": 1, "e9": 1}) for i in range(1, 7)}
    rules.update({f"eps{i}": _rule(**{f"e{i}": 1, "e9": -1}) for i in (7, 8)})
    ren = RenamingMap(src, tuple(f"eps{i}" for i in range(1, 9)), rules)
    ev = ren.apply({f"e{i}": e[i] for i in range(1, 10)})
    res = recognize(M, "H5", tuple(ev[f"eps{i}"] for i in range(1, 9)))
    return PipelineResult(res, ren, stages)


def pipeline_H5_to_H3(h5: NamedOperator) -> PipelineResult:
    e = list(h5.params)
    s = (6 - sum(e)) / 3
    stages = [_stage("H5", h5.op)]
    M = middle_convolution(h5.op, s)
    stages.append(_stage(f"mc_{fmt_q(s)}", M))
    k0, k1 = e[0] - 1 + s, e[3] - 1 + s
    N = _to_h3(M, k0, k1)
    stages.append(_stage("Ad", N))
    src = tuple(f"e{i}" for i in range(1, 9))
    third = {f"e{i}": Fraction(-1, 3) for i in range(1, 9)}

    def plus_s(rule, c):
        out = dict(rule)
        for k, v in third.items():
            out[k] = out.get(k, Fraction(0)) + v
        return _with_const(out, c)

    rules = {
        "eps1": _rule(e2=1, e1=-1), "eps2": _rule(e3=1, e1=-1),
        "eps3": _rule(e5=1, e4=-1), "eps4": _rule(e6=1, e4=-1),
        # s = 2 - (e1 + ... + e8)/3
        "eps5": plus_s(_rule(e1=1, e4=1, e7=1), 1), "eps6": plus_s(_rule(e1=1, e4=1, e8=1), 1),
    }
    ren = RenamingMap(src, tuple(f"eps{i}" for i in range(1, 7)), rules)
    ev = ren.apply({f"e{i}": v for i, v in enumerate(e, 1)})
    res = recognize(N, "H3", tuple(ev[f"eps{i}"] for i in range(1, 7)))
    return PipelineResult(res, ren, stages)


def pipeline_H4_to_H3(h4: NamedOperator) -> PipelineResult:
    c = list(h4.params)
    c8 = 4 - sum(c)
    stages = [_stage("H4", h4.op)]
    # th -> th - (c8 - 1) produces the factor th + 1 = D x in T0
    M = middle_convolution(h4.op, c8 - 1)
    stages.append(_stage(f"mc_{fmt_q(c8 - 1)}", M))
    N = M.normalized()
    src = tuple(f"c{i}" for i in range(1, 8))
    allc = {f"c{i}": Fraction(-1) for i in range(1, 8)}

    def shifted(i, sign):
        # c_i + sign * (c8 - 1), with c8 = 4 - (c1 + ... + c7)
        out = {k: v * sign for k, v in allc.items()}
        out[f"c{i}"] = out[f"c{i}"] + 1
        return _with_const(out, 3 * sign)

    rules = {f"eps{i}": shifted(i, 1) for i in range(1, 5)}
    rules.update({f"eps{i}": shifted(i, -1) for i in (5, 6)})
    ren = RenamingMap(src, tuple(f"eps{i}" for i in range(1, 7)), rules)
    ev = ren.apply({f"c{i}": v for i, v in enumerate(c, 1)})
    res = recognize(N, "H3", tuple(ev[f"eps{i}"] for i in range(1, 7)))
    return PipelineResult(res, ren, stages)


PIPELINES = {
    "h3-h6": pipeline_H3_to_H6,
    "h3-h5": pipeline_H3_to_H5,
    "h3-h4": pipeline_H3_to_H4,
    "h6-h3": pipeline_H6_to_H3,
    "h6-h5": pipeline_H6_to_H5,
    "h5-h3": pipeline_H5_to_H3,
    "h4-h3": pipeline_H4_to_H3,
}
