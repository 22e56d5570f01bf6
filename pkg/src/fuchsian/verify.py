"""Check registry behind ``fuchsian verify`` and the acceptance tests.

Each check draws its instance from a generator seeded by (seed, check id,
trial), so a report depends only on its arguments."""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import fmt_q
from .catalog import (
    build_E2,
    build_E6,
    build_G6,
    build_H3,
    build_H6,
    build_self_adjoint,
)
from .errors import FuchsError, NoSolution
from .factor import (
    e6_1113_decomposition,
    e6_interpolation_sides,
    factor_E2_kummer,
    factor_H4_cases,
    factor_H5_cases,
    factor_H6_special,
    kummer_degree,
    sae5_factorization,
)
from .fuchs import accessory_count
from .sampling import (
    is_generic,
    random_a,
    random_accessory,
    random_exponent,
    random_params,
    scheme_of_operator,
    _scheme,
)
from .shifts import (
    Ansatz,
    e2_shift_operator,
    e2_svalue,
    e2_svalue_formula,
    h6_alpha,
    h6_P0p0,
    h6_P0p0_svalue,
    h6_shift_operator,
    h6_svalue,
    reducibility_certificate,
    remote_svalue,
    shift_descriptor,
    solve_shift_relation,
)
from .transforms import (
    GaugeFactor,
    conjugate,
    middle_convolution,
    pipeline_H3_to_H6,
    pipeline_H6_to_H3,
)
from .weyl import DiffOp, adjoint, from_theta_form, op_right_exact, parse_op, substitute_1mx, substitute_inv
from .catalog import lin
from .weyl import ThetaForm


class Skip(Exception):
    pass


@dataclass
class VerificationReport:
    check: str
    family: str
    trial: int
    instantiation: dict
    status: str  # "pass", "fail" or "skipped"
    witness: str = None
    reason: str = None
    items: list = field(default_factory=list)

    def to_json(self):
        out = {"check": self.check, "family": self.family, "trial": self.trial,
               "instantiation": self.instantiation, "status": self.status,
               "items": [{"name": n, "ok": ok} for n, ok, _ in self.items]}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        return out


class _Ledger:
    """Collects named boolean checks together with a witness for each failure."""

    def __init__(self):
        self.items = []

    def eq(self, name, got, want):
        ok = got == want
        self.items.append((name, ok, None if ok else f"{name}: got {_show(got)}, expected {_show(want)}"))

    def op_eq(self, name, lhs: DiffOp, rhs: DiffOp):
        ok = lhs == rhs
        w = None if ok else f"{name}: residual {(lhs - rhs).to_str()}"
        self.items.append((name, ok, w))

    def true(self, name, ok, witness=""):
        self.items.append((name, bool(ok), None if ok else f"{name}: {witness or 'false'}"))


def _show(v):
    if isinstance(v, Fraction):
        return fmt_q(v)
    if isinstance(v, DiffOp):
        return v.to_str()
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(_show(x) for x in v) + "]"
    return str(v)


def _q(vals):
    return [fmt_q(Fraction(v)) for v in vals]


# ---------------------------------------------------------------- criteria

def check_scheme(rng, led):
    inst = {}
    for fam in ("E2", "H3", "H4", "H5", "H6"):
        p = random_params(fam, rng)
        u = random_accessory(rng)
        inst[fam] = _q(p)
        led.eq(f"{fam} scheme", scheme_of_operator(fam, p, u), _scheme(fam, p))
    return "all", inst


# spectral types per family and expected accessory count
ACCESSORY_TABLE = {
    "H6": (("3111", "3111", "3111"), 6, 1),
    "H5": (("2111", "2111", "311"), 5, 1),
    "H4": (("211", "211", "1111"), 4, 1),
    "H3": (("111", "111", "111"), 3, 1),
    "E2": (("11", "11", "11"), 2, 0),
}


def check_accessory(rng, led):
    for fam, (types, n, want) in ACCESSORY_TABLE.items():
        led.eq(f"{fam} accessory count", accessory_count(types, n), want)
    return "all", {}


def check_h6_shift_solver(rng, led):
    e = random_params("H6", rng)
    for name in ("-00", "0-0", "--+"):
        tr = solve_shift_relation("H6", e, shift_descriptor("H6", name))
        P, Qop = h6_shift_operator(e, name)
        led.eq(f"alpha {name}", tr.alpha, h6_alpha(e, name))
        led.true(f"P {name}", tr.P.equals_up_to_scalar(P), tr.P.to_str())
        led.true(f"Q {name}", tr.Q.equals_up_to_scalar(Qop), tr.Q.to_str())
    from .fuchs import ExponentSet

    es = ExponentSet.of(e)
    led.eq("alpha -00 closed form", h6_alpha(e, "-00"), es.s1(3) + es.s2(3) + 1)
    return "H6", {"e": _q(e)}


def check_h6_svalues(rng, led):
    from .fuchs import ExponentSet

    e = random_params("H6", rng)
    u = random_accessory(rng)
    es = ExponentSet.of(e)
    s = es.s
    base = s * (s + 1) * (s + 2)
    closed_form = {
        "--+": -base * es[7] * es[8] * es[9],
        "-00": -base * (s + es[4]) * (s + es[5]) * (s + es[6]),
        "0-0": base * (s + es[1]) * (s + es[2]) * (s + es[3]),
    }
    for name, want in closed_form.items():
        led.eq(f"Sv {name}", h6_svalue(e, u, name).value, want)
    # (th + s - 1) o P_{0+0} = x^3 H6 + Sv_{0+0}
    x = DiffOp.x()
    lhs = from_theta_form(ThetaForm({0: lin(s - 1)})) * h6_P0p0(e, u)
    sv = (1 - s) * (-s) * (-1 - s) * (1 - s - es[1]) * (1 - s - es[2]) * (1 - s - es[3])
    led.eq("Sv 0+0 closed form", h6_P0p0_svalue(e), sv)
    led.op_eq("Sv 0+0 identity", lhs, (x ** 3) * build_H6(e, u).op + sv)
    return "H6", {"e": _q(e), "t10": fmt_q(u)}


def _e2_pairs(a, b, c):
    """(name, source, target, P, Q) for the eight contiguity pairs."""
    out = []
    for name in ("a+", "a-", "b+", "b-", "c+", "c-"):
        P, Qop = e2_shift_operator(a, b, c, name)
        tgt = shift_descriptor("E2", name).apply((a, b, c))
        out.append((name, (a, b, c), tgt, P, Qop))
    # the same shifts written in exponent notation: e1 = 1 - c, e2 = c - a - b
    x, D = DiffOp.x(), DiffOp.D()
    e1, e2 = 1 - c, c - a - b
    out.append(("1+2-", (a, b, c), (a, b, c - 1), x * D - e1, None))
    out.append(("1-2+", (a, b, c), (a, b, c + 1), (x - 1) * D - e2, None))
    return out


def check_gauss(rng, led):
    a, b, c = random_params("E2", rng)
    E = build_E2(a, b, c).op
    led.op_eq("adjoint", adjoint(E), build_E2(1 - a, 1 - b, 2 - c).op)
    # x^(-a-1) E|_{x->1/x} o x^a = -E(a, 1 - c + a, 1 + a - b)
    x = DiffOp.x()
    inv = conjugate(substitute_inv(E), GaugeFactor.of(a, 0))
    lhs = DiffOp.function(x.coeff(0).inverse()) * inv
    led.op_eq("x->1/x", lhs, -build_E2(a, 1 - c + a, 1 + a - b).op)
    for name, src, tgt, P, Qop in _e2_pairs(a, b, c):
        rel = build_E2(*tgt).op * P
        if Qop is None:
            try:
                Qop = op_right_exact(rel, build_E2(*src).op)
            except FuchsError as ex:
                led.true(f"pair {name}", False, str(ex))
                continue
            led.true(f"pair {name} Q order", Qop.order() == 1, Qop.to_str())
        led.op_eq(f"pair {name}", rel, Qop * build_E2(*src).op)
    for name in ("a-", "b-", "c-"):
        led.eq(f"Sv {name}", e2_svalue(a, b, c, name).value, e2_svalue_formula(a, b, c, name))
    led.eq("Sv a- closed form", e2_svalue(a, b, c, "a-").value, -(a - 1) * (a - c))
    led.eq("Sv b- closed form", e2_svalue(a, b, c, "b-").value, -(b - 1) * (b - c))
    led.eq("Sv c- closed form", e2_svalue(a, b, c, "c-").value, -(b - c + 1) * (a - c + 1))
    return "E2", {"a": fmt_q(a), "b": fmt_q(b), "c": fmt_q(c)}


KUMMER_TYPE = {
    # (condition on a, value) -> (type, degree)
    ("a", -2): ("I", 2), ("a", -1): ("I", 1), ("a", 0): ("I", 0),
    ("a", 1): ("IV", 0), ("a", 2): ("IV", 1),
    ("c-a", -1): ("II", 1), ("c-a", 0): ("II", 0), ("c-a", 1): ("III", 0), ("c-a", 2): ("III", 1),
}


def check_kummer(rng, led):
    b = random_exponent(rng)
    a0 = random_exponent(rng)
    c0 = random_exponent(rng)
    while not is_generic("E2", (a0, b, c0)):
        b, a0, c0 = random_exponent(rng), random_exponent(rng), random_exponent(rng)
    for (cond, v), (typ, deg) in KUMMER_TYPE.items():
        a, c = (Fraction(v), c0) if cond == "a" else (a0, a0 + v)
        f = factor_E2_kummer(a, b, c)
        led.eq(f"{cond}={v} type", f.extra["kummer_type"], typ)
        led.eq(f"{cond}={v} deg g", f.extra["g_degree"], deg)
        led.eq(f"{cond}={v} expected deg", kummer_degree(a, b, c), deg)
        led.true(f"{cond}={v} product", f.exact(), "factors do not re-multiply")
    return "E2", {"a": fmt_q(a0), "b": fmt_q(b), "c": fmt_q(c0)}


def check_pipelines(rng, led):
    bb = random_params("H3", rng)
    u = random_accessory(rng)
    h3 = build_H3(bb, u)
    g0, g1, mu = random_exponent(rng), random_exponent(rng), random_exponent(rng)
    res = pipeline_H3_to_H6(h3, g0, g1, mu)
    ev = res.renaming.apply({**{f"b{i + 1}": v for i, v in enumerate(list(bb) + [3 - sum(bb)])},
                             "g0": g0, "g1": g1, "u": mu})
    e = tuple(ev[f"e{i}"] for i in range(1, 10))
    led.true("H3->H6 equals build_H6",
             res.result.op.same_up_to_function(build_H6(e, res.result.accessory).op))
    back = pipeline_H6_to_H3(res.result)
    led.eq("H6->H3 exponents", tuple(back.result.params), tuple(bb))
    nu = random_exponent(rng)
    led.true("mc_nu o mc_-nu", middle_convolution(middle_convolution(h3.op, nu), -nu)
             .same_up_to_function(h3.op))
    return "H3", {"b": _q(bb), "a00": fmt_q(u), "g0": fmt_q(g0), "g1": fmt_q(g1), "mu": fmt_q(mu),
                  "nu": fmt_q(nu)}


def check_factor_ledger(rng, led):
    e8 = random_params("H6", rng)[:8]
    u = random_accessory(rng)
    f = factor_H6_special(e8 + (Fraction(0),), u, "e9=0")
    led.true("H6(e9=0) = H5 o D", f.exact() and f.recognized[0].params == tuple(e8))
    f = factor_H6_special(e8 + (3 - sum(e8),), u, "s=1")
    led.true("H6(s=1) = D^3 o X3", f.exact() and f.recognized[3].family == "H3")
    rest = random_params("H5", rng)[1:]
    f = factor_H5_cases(((sum(rest) - 3) / 2,) + rest, u)
    led.eq("H5(e1-r=1) type", f.type_tag, (1, 4))
    led.true("H5(e1-r=1) product", f.exact() and 1 in f.recognized)
    e7 = random_params("H5", rng)[:7]
    f = factor_H5_cases(e7 + (12 - sum(e7),), u)
    led.eq("H5(r=2) type", f.type_tag, (3, 1, 1))
    led.true("H5(r=2) product", f.exact())
    c6 = random_params("H4", rng)[:6]
    for v in (0, 1):
        f = factor_H4_cases(c6 + (Fraction(v),), u)
        led.true(f"H4(e7={v})", f.exact() and f.type_tag == ((3, 1) if v == 0 else (1, 3)))
    return "H6/H5/H4", {"e8": _q(e8), "t10": fmt_q(u), "h5": _q(rest), "h4": _q(c6)}


def check_g6_symmetries(rng, led):
    from .fuchs import ExponentSet

    es = ExponentSet.of(random_params("H6", rng))
    a = random_a(rng)
    a0, a1, a2, a3, a4, a5, a6 = a
    E, s = es.e, es.s
    G = build_G6(E, a).op
    adj_e = [2 - v for v in E[:6]] + [1 - v for v in E[6:]]
    led.op_eq("adjoint", adjoint(G), build_G6(adj_e, (-a0, -a1, -a2, -a3, a4, a5, a6)).op)
    led.op_eq("x->1-x", substitute_1mx(G),
              build_G6(E[3:6] + E[0:3] + E[6:9], (-a0, -a2, -a1, -a3, -a5, -a4, -a6)).op)
    # x^(r-3) G|_{x->1/x} o x^(-r), r = -s; equals the closed-form right side times -1
    x = DiffOp.x().coeff(0)
    lhs = DiffOp.function(x ** -3) * conjugate(substitute_inv(G), GaugeFactor.of(s, 0))
    inv_e = [v - s for v in E[6:9]] + list(E[3:6]) + [v + s for v in E[0:3]]
    led.op_eq("x->1/x", lhs, -build_G6(inv_e, (-a0, -a3, -a2, -a1, -a6, -a5, -a4)).op)
    D = DiffOp.D()
    led.op_eq("D E6", D * build_E6(E).op,
              build_E6([v - 1 for v in E[:6]] + [v + 1 for v in E[6:]]).op * D)
    return "G6", {"e": _q(E), "a": _q(a)}


SA_DISPLAYS = {
    "saE2": "x*(x-1)*D^2+(2*x-1)*D+1/4",
    "saE3": "x^2*(x-1)^2*D^3+3*x*(x-1)*(2*x-1)*D^2+(7*x^2-7*x+1)*D+x-1/2",
    "saE4": "x^2*(x-1)^2*D^4+4*x*(x-1)*(2*x-1)*D^3+(29/2*x^2-29/2*x+9/4)*D^2"
            "+(5*x-5/2)*D+1/16",
    "saE5": "x^3*(x-1)^3*D^5+15*x^2*(2*x-1)*(x-1)^2/2*D^4+x*(x-1)*(256*x^2-256*x+49)/4*D^3"
            "+3*(2*x-1)*(112*x^2-112*x+9)/8*D^2+(24*x^2-24*x+17/4)*D",
    "saE6": "x^3*(x-1)^3*D^6+9*x^2*(x-1)^2*(2*x-1)*D^5+(391*x^2-391*x+76)*(x-1)*x/4*D^4"
            "+(2*x-1)*(91*x^2-91*x+8)*D^3+(1539/16*x^2-1539/16*x+18)*D^2+(51/8*x-51/16)*D-3/64",
}


def check_self_adjoint(rng, led):
    for name, text in SA_DISPLAYS.items():
        n = build_self_adjoint(name)
        led.op_eq(f"{name} display", n.op, parse_op(text))
        sign = -1 if n.op.order() % 2 else 1
        led.op_eq(f"{name} self-adjoint", adjoint(n.op).scale(sign), n.op)
    led.eq("saE6 T10", build_self_adjoint("saE6").accessory, Fraction(-17, 4))
    f = sae5_factorization()
    led.true("saE5 = L o X o D", f.exact())
    led.eq("saE5 type", f.type_tag, (1, 3, 1))
    return "self-adjoint", {}


def _non_integer_e8(rng):
    while True:
        e8 = random_params("H6", rng)[:8]
        if (3 - sum(e8)).denominator != 1:
            return e8


def check_1113(rng, led):
    e8 = _non_integer_e8(rng)
    for n in (1, 2):
        d = e6_1113_decomposition(e8, n)
        for k, ok in d.checks.items():
            led.true(f"n={n} {k}", ok)
    return "E6", {"e8": _q(e8)}


def check_interpolative(rng, led):
    e = random_params("H6", rng)
    lhs, rhs = e6_interpolation_sides(e)
    led.op_eq("E6 - U", lhs, rhs)
    return "E6", {"e": _q(e)}


def check_remote(rng, led):
    p = random_params("E2", rng)
    e = random_params("H6", rng)
    u = random_accessory(rng)
    for k in (2, 3):
        for name in ("a-", "b-", "c-"):
            d, prod = remote_svalue("E2", p, name, k)
            led.eq(f"E2 {name} k={k}", d, prod)
        for name in ("-00", "0-0", "--+"):
            d, prod = remote_svalue("H6", e, name, k, u)
            led.eq(f"H6 {name} k={k}", d, prod)
    return "E2/H6", {"abc": _q(p), "e": _q(e), "t10": fmt_q(u)}


def check_h3_no_shift(rng, led):
    bb = random_params("H3", rng)
    for name in ("-0", "+0", "0-", "0+"):
        for order, extra in ((1, 1), (2, 1), (2, 2)):
            try:
                solve_shift_relation("H3", bb, shift_descriptor("H3", name),
                                     ansatz=Ansatz.monomial(order, extra))
                led.true(f"{name} order {order}", False, "a shift operator was found")
            except NoSolution:
                led.true(f"{name} order {order}", True)
    return "H3", {"b": _q(bb)}


def check_generic_certificate(rng, led):
    inst = {}
    for fam in ("E2", "H4", "H5", "H6"):
        p = random_params(fam, rng)
        inst[fam] = _q(p)
        led.eq(f"{fam} certificate", reducibility_certificate(fam, p), [])
    return "all", inst


# id -> (criterion, suites, function, randomized)
CHECKS = {
    "c01-scheme": ("1", ("scheme",), check_scheme, True),
    "c02-accessory": ("2", ("scheme",), check_accessory, False),
    "c03-h6-shift-solver": ("3", ("shifts",), check_h6_shift_solver, True),
    "c04-h6-svalues": ("4", ("shifts",), check_h6_svalues, True),
    "c05-gauss": ("5", ("gauss",), check_gauss, True),
    "c06-kummer": ("6", ("gauss", "factor"), check_kummer, True),
    "c07-pipelines": ("7", ("pipelines",), check_pipelines, True),
    "c08-factor-ledger": ("8", ("factor",), check_factor_ledger, True),
    "c09-g6-symmetries": ("9", ("g6-symmetries",), check_g6_symmetries, True),
    "c10-self-adjoint": ("10", ("self-adjoint",), check_self_adjoint, False),
    "c11-1113": ("11", ("e6", "factor"), check_1113, True),
    "c12-interpolative": ("12", ("e6", "factor"), check_interpolative, True),
    "c13-remote-svalues": ("13", ("shifts",), check_remote, True),
    "x-h3-no-shift": ("", ("substitutes",), check_h3_no_shift, True),
    "x-generic-certificate": ("", ("substitutes",), check_generic_certificate, True),
}

SUITES = sorted({s for _, suites, _, _ in CHECKS.values() for s in suites} | {"all"})


def checks_in_suite(suite):
    if suite == "all":
        return sorted(CHECKS)
    if suite in CHECKS:
        return [suite]
    ids = sorted(k for k, (_, suites, _, _) in CHECKS.items() if suite in suites)
    if not ids:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return ids


def run_check(check_id, trial, seed) -> VerificationReport:
    _, _, fn, _ = CHECKS[check_id]
    rng = random.Random(f"{seed}:{check_id}:{trial}")
    led = _Ledger()
    try:
        family, inst = fn(rng, led)
    except Skip as ex:
        return VerificationReport(check_id, "", trial, {}, "skipped", reason=str(ex))
    except FuchsError as ex:
        return VerificationReport(check_id, "", trial, {}, "fail",
                                  witness=f"{type(ex).__name__}: {ex}", items=led.items)
    inst = dict(inst, seed=seed)
    bad = [w for _, ok, w in led.items if not ok]
    status = "fail" if bad else "pass"
    return VerificationReport(check_id, family, trial, inst, status,
                              witness="; ".join(bad) if bad else None, items=led.items)


def cmd_verify(suite="all", trials=1, seed=0):
    """Reports sorted by (check id, trial)."""
    out = []
    for cid in checks_in_suite(suite):
        n = trials if CHECKS[cid][3] else 1
        for t in range(n):
            out.append(run_check(cid, t, seed))
    return out
