"""Command-line frontend.

Exit codes: 0 success, 1 domain error (or failing verification), 2 usage error."""

import argparse
import json
import sys

from . import catalog, factor, sampling, shifts, transforms, verify
from .arith import Q, fmt_q
from .errors import FuchsError
from .transforms import GaugeFactor
from .weyl import DiffOp, format_op

SCHEMA = 1
FAMILIES = ("E2", "H3", "H4", "H5", "H6", "G6", "E6")
SELF_ADJOINT = ("saE2", "saE3", "saE4", "saE5", "saE6")


class UsageError(Exception):
    pass


def _fracs(text, n=None, what="--e"):
    if text is None:
        raise UsageError(f"{what} is required")
    try:
        vals = tuple(Q(v.strip()) for v in text.split(",") if v.strip())
    except (ValueError, ZeroDivisionError) as ex:
        raise UsageError(f"{what}: {ex}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"{what} expects {n} values, got {len(vals)}")
    return vals


def _q(text, default="0", what="value"):
    try:
        return Q(text if text is not None else default)
    except (ValueError, ZeroDivisionError) as ex:
        raise UsageError(f"{what}: {ex}") from None


def _build(args):
    fam = args.family
    if fam in SELF_ADJOINT:
        return catalog.build_self_adjoint(fam)
    if fam not in FAMILIES:
        raise UsageError(f"unknown family {fam!r}")
    n = sampling.NPARAMS[fam]
    e = _fracs(args.e, n)
    if fam == "E2":
        return catalog.build_E2(*e)
    if fam == "G6":
        return catalog.build_G6(e, _fracs(args.a, 7, "--a") if args.a else (0,) * 7)
    if fam == "E6":
        return catalog.build_E6(e)
    return catalog.BUILDERS[fam](e, _q(args.t10, what="--t10"))


def _op_json(op: DiffOp):
    return {"xD": format_op(op), "theta": format_op(op, "theta")}


def _named_json(n):
    return {"family": n.family, "params": [fmt_q(v) for v in n.params],
            "accessory": None if n.accessory is None else fmt_q(n.accessory),
            "operator": _op_json(n.op), "scheme": n.scheme.to_json()}


def _op_text(title, op):
    return f"{title}\n  xD:    {format_op(op)}\n  theta: {format_op(op, 'theta')}"


# ---------------------------------------------------------------- verbs

def cmd_build(args):
    n = _build(args)
    text = "\n".join([n.label(), _op_text("operator", n.op), str(n.scheme)])
    return _named_json(n), text


def cmd_transform(args):
    n = _build(args)
    verb = args.verb
    if verb == "ad":
        g = GaugeFactor.of(_q(args.g0, what="--g0"), _q(args.g1, what="--g1"))
        out = transforms.addition(n.op, g)
        what = f"Ad(x^{fmt_q(g.g0)} (x-1)^{fmt_q(g.g1)})"
    elif verb == "mc":
        if args.mu is None:
            raise UsageError("--mu is required")
        mu = _q(args.mu, what="--mu")
        out = transforms.middle_convolution(n.op, mu)
        what = f"mc_{fmt_q(mu)}"
    elif verb == "ch1mx":
        out = transforms.coordinate_change_1mx(n.op)
        what = "x->1-x"
    else:
        out = transforms.coordinate_change_inv(n.op, _q(args.power, what="--power"))
        what = "x->1/x"
    from .fuchs import riemann_scheme

    try:
        rs = riemann_scheme(out)
        scheme, scheme_text = rs.to_json(), str(rs)
    except ValueError as ex:
        scheme, scheme_text = None, f"scheme: {ex}"
    data = {"source": n.label(), "transform": what, "operator": _op_json(out), "scheme": scheme}
    return data, "\n".join([f"{what} of {n.label()}", _op_text("operator", out), scheme_text])


def cmd_pipe(args):
    if args.name not in transforms.PIPELINES:
        raise UsageError(f"unknown pipeline {args.name!r}; choose from "
                         + ", ".join(sorted(transforms.PIPELINES)))
    src_family = args.name.split("-")[0].upper()
    args.family = src_family
    n = _build(args)
    fn = transforms.PIPELINES[args.name]
    if args.name == "h3-h6":
        res = fn(n, _q(args.g0, what="--g0"), _q(args.g1, what="--g1"), _q(args.mu, what="--mu"))
    elif args.name == "h3-h5":
        res = fn(n, _q(args.g1, what="--g1"), _q(args.mu, what="--mu"))
    elif args.name == "h3-h4":
        res = fn(n, _q(args.mu, what="--mu"))
    else:
        res = fn(n)
    data = res.to_json()
    data["operator"] = _op_json(res.result.op)
    lines = [f"{n.label()} -> {res.result.label()}"]
    lines += [f"  {name}: order {op.order()}" for name, op, _ in res.stages]
    lines += [f"  {k} = {v}" for k, v in res.renaming.to_json().items()]
    return data, "\n".join(lines)


def _family_params(args):
    fam = args.family
    if fam not in FAMILIES:
        raise UsageError(f"unknown family {fam!r}")
    return fam, _fracs(args.e, sampling.NPARAMS[fam])


def cmd_shift(args):
    fam, e = _family_params(args)
    if fam in ("G6", "E6"):
        fam = "H6"
    try:
        desc = shifts.shift_descriptor(fam, args.sh)
    except ValueError as ex:
        raise UsageError(str(ex)) from None
    tr = shifts.solve_shift_relation(fam, e, desc)
    data = tr.to_json()
    text = "\n".join([f"{fam} shift {desc.name}: {[fmt_q(v) for v in desc.offsets]}",
                      f"  P     = {tr.P.to_str()}", f"  Q     = {tr.Q.to_str()}",
                      f"  alpha = {fmt_q(tr.alpha)}"])
    return data, text


def cmd_svalue(args):
    fam, e = _family_params(args)
    u = _q(args.t10, what="--t10")
    name = shifts.ALIASES.get(args.sh, args.sh)
    if fam in ("H6", "G6", "E6") and name in ("-00", "0-0", "--+"):
        if fam == "G6":
            u = shifts.g6_t10(e, _fracs(args.a, 7, "--a")) if args.a else catalog.s10(e)
        elif fam == "E6":
            u = catalog.s10(e)
        sv = shifts.h6_svalue(e, u, name)
        formula = shifts.h6_svalue_formula(e, name)
    elif fam == "E2" and name in ("a-", "b-", "c-"):
        sv = shifts.e2_svalue(*e, name)
        formula = shifts.e2_svalue_formula(*e, name)
    elif fam == "H5" and name in ("-0", "0-"):
        sv = shifts.h5_svalue(e, u, name)
        formula = shifts.h5_svalue_formula(e, name)
    elif fam == "H4" and name == "d":
        sv = shifts.svalue(shifts.h4_inverse_operator(e, u), DiffOp.D(),
                           catalog.build_H4(e, u).op, shift="d", direction="minus")
        formula = -shifts.h4_p0(e)
    else:
        raise UsageError(f"no S-value for {fam} shift {args.sh!r}")
    data = dict(sv.to_json(), family=fam, params=[fmt_q(v) for v in e], formula=fmt_q(formula),
                matches_formula=sv.value == formula)
    text = f"Sv_{name} = {fmt_q(sv.value)} (formula {fmt_q(formula)})"
    return data, text


def cmd_reducible(args):
    fam, e = _family_params(args)
    fam = "H6" if fam in ("G6", "E6") else fam
    cert = shifts.reducibility_certificate(fam, e)
    data = {"family": fam, "params": [fmt_q(v) for v in e], "certificate": cert,
            "reducible": bool(cert)}
    text = ("reducible: " + ", ".join(f"{c} is an integer" for c in cert)) if cert \
        else "no integer condition holds (generic)"
    return data, text


def cmd_factor(args):
    fam = args.family
    if fam == "saE5":
        f = factor.sae5_factorization()
    else:
        fam, e = _family_params(args)
        u = _q(args.t10, what="--t10")
        if fam == "H6":
            if args.case is None:
                raise UsageError("--case is required for H6: " + ", ".join(factor.H6_CASES))
            f = factor.factor_H6_special(e, u, args.case)
        elif fam == "E2":
            f = factor.factor_E2_kummer(*e)
        elif fam == "H5":
            f = factor.factor_H5_cases(e, u)
        elif fam == "H4":
            f = factor.factor_H4_cases(e, u)
        else:
            raise UsageError(f"no factorization routine for {fam}")
    data = f.to_json()
    if "kummer_type" in f.extra:
        data["kummer_type"] = f.extra["kummer_type"]
        data["g"] = f.extra["g"].to_str()
    lines = [f"type {f.type_str()}"]
    for i, (F, lab) in enumerate(zip(f.factors, f.labels or [""] * len(f.factors))):
        lines.append(f"  F{i + 1} [{lab}] = {F.to_str()}")
    for k, r in sorted(f.recognized.items()):
        lines.append(f"  F{k + 1} is essentially {r.family}({', '.join(fmt_q(p) for p in r.params)})")
    pts = f.apparent_singularities
    lines.append("apparent singularities: " + (", ".join(fmt_q(p) for p in pts) if pts else "none"))
    lines.append(f"verified: {f.verify()}")
    return data, "\n".join(lines)


def cmd_verify(args):
    try:
        reports = verify.cmd_verify(args.suite, args.trials, args.seed)
    except ValueError as ex:
        raise UsageError(str(ex)) from None
    data = {"suite": args.suite, "trials": args.trials, "seed": args.seed,
            "reports": [r.to_json() for r in reports],
            "summary": {s: sum(1 for r in reports if r.status == s)
                        for s in ("pass", "fail", "skipped")}}
    lines = []
    for r in reports:
        line = f"{r.status.upper():7} {r.check} trial {r.trial}"
        if r.witness:
            line += f"  [{r.witness}]"
        lines.append(line)
    s = data["summary"]
    lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped")
    return data, "\n".join(lines)


VERBS = {
    "build": cmd_build, "ad": cmd_transform, "mc": cmd_transform, "ch1mx": cmd_transform,
    "chinv": cmd_transform, "pipe": cmd_pipe, "shift-solve": cmd_shift, "svalue": cmd_svalue,
    "reducible": cmd_reducible, "factor": cmd_factor, "verify": cmd_verify,
}


def _common(p):
    p.add_argument("--e", help="comma-separated exponents, e.g. 1/7,2/7,...")
    p.add_argument("--t10", help="accessory parameter")
    p.add_argument("--a", help="a0..a6 for G6")
    p.add_argument("--json", action="store_true", help="emit JSON")


def build_parser():
    parser = argparse.ArgumentParser(prog="fuchsian", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("build", help="construct an operator")
    p.add_argument("family")
    _common(p)
    for verb, hlp in (("ad", "addition x^g0 (x-1)^g1"), ("mc", "middle convolution"),
                      ("ch1mx", "coordinate change x -> 1-x"), ("chinv", "coordinate change x -> 1/x")):
        p = sub.add_parser(verb, help=hlp)
        p.add_argument("family")
        _common(p)
        p.add_argument("--g0")
        p.add_argument("--g1")
        p.add_argument("--mu")
        p.add_argument("--power", help="right factor x^power after x -> 1/x")
    p = sub.add_parser("pipe", help="run a pipeline between families")
    p.add_argument("name")
    _common(p)
    p.add_argument("--g0")
    p.add_argument("--g1")
    p.add_argument("--mu")
    for verb in ("shift-solve", "svalue"):
        p = sub.add_parser(verb)
        p.add_argument("family")
        p.add_argument("sh", nargs="?")
        p.add_argument("--sh", dest="sh_flag")
        _common(p)
    p = sub.add_parser("reducible", help="integer conditions forcing reducibility")
    p.add_argument("family")
    _common(p)
    p = sub.add_parser("factor", help="explicit factorization")
    p.add_argument("family")
    p.add_argument("--case")
    _common(p)
    p = sub.add_parser("verify", help="run the verification ledger")
    p.add_argument("--suite", default="all")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    return parser


VALUE_FLAGS = ("--e", "--t10", "--a", "--mu", "--g0", "--g1", "--power")


def _join_negative_values(argv):
    """Let '--e -2,1/3' through: argparse would read '-2,1/3' as an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and argv[i + 1][1:2] not in ("-", ""):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_join_negative_values(argv))
    if args.verb in ("shift-solve", "svalue"):
        args.sh = args.sh or args.sh_flag
        if not args.sh:
            parser.error("a shift name is required (positional or --sh)")
    try:
        data, text = VERBS[args.verb](args)
    except UsageError as ex:
        parser.error(str(ex))
    except (FuchsError, ValueError, ArithmeticError) as ex:
        if getattr(args, "json", False):
            print(json.dumps({"schema": SCHEMA, "command": args.verb,
                              "error": {"type": type(ex).__name__, "message": str(ex)}},
                             indent=2, sort_keys=True))
        else:
            print(f"error: {type(ex).__name__}: {ex}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(dict(data, schema=SCHEMA, command=args.verb), indent=2, sort_keys=True))
    else:
        print(text)
    if args.verb == "verify" and data["summary"]["fail"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
