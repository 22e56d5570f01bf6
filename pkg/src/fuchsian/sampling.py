"""Seeded random instantiations of the families.

Exponents are p/q with q in {7, 11, 13, 17, 19} and p coprime to q; draws
are rejected until the instance is generic for its family."""

import random
from fractions import Fraction
from math import gcd

from .catalog import build_E2, build_H3, build_H4, build_H5, build_H6
from .fuchs import riemann_scheme
from .shifts import reducibility_certificate

DENOMINATORS = (7, 11, 13, 17, 19)
NPARAMS = {"E2": 3, "H3": 6, "H4": 7, "H5": 8, "H6": 9, "G6": 9, "E6": 9}

# spectral type of a generic member, column by column
GENERIC_TYPE = {
    "E2": ((1, 1), (1, 1), (1, 1)),
    "H3": ((1, 1, 1), (1, 1, 1), (1, 1, 1)),
    "H4": ((2, 1, 1), (2, 1, 1), (1, 1, 1, 1)),
    "H5": ((2, 1, 1, 1), (2, 1, 1, 1), (3, 1, 1)),
    "H6": ((3, 1, 1, 1), (3, 1, 1, 1), (3, 1, 1, 1)),
}


def make_rng(seed) -> random.Random:
    return random.Random(seed)


def random_exponent(rng: random.Random, span=2) -> Fraction:
    q = rng.choice(DENOMINATORS)
    while True:
        p = rng.randint(-span * q, span * q)
        if gcd(p, q) == 1:
            return Fraction(p, q)


def _scheme(family, params):
    if family == "E2":
        return build_E2(*params).scheme
    builder = {"H3": build_H3, "H4": build_H4, "H5": build_H5, "H6": build_H6}[family]
    return builder(params, 0).scheme


def is_generic(family, params) -> bool:
    fam = "H6" if family in ("G6", "E6") else family
    if any(Fraction(v).denominator == 1 for v in params):
        return False
    if _scheme(fam, params).spectral_type() != GENERIC_TYPE[fam]:
        return False
    if fam != "H3" and reducibility_certificate(fam, params):
        return False
    return True


def random_params(family, rng: random.Random, max_tries=10000):
    n = NPARAMS[family]
    for _ in range(max_tries):
        p = tuple(random_exponent(rng) for _ in range(n))
        if is_generic(family, p):
            return p
    raise RuntimeError(f"no generic {family} instance in {max_tries} draws")


def random_accessory(rng: random.Random) -> Fraction:
    return random_exponent(rng, span=3)


def random_a(rng: random.Random):
    return tuple(random_exponent(rng) for _ in range(7))


def scheme_of_operator(family, params, u=0):
    """Riemann scheme computed from the operator, for comparison."""
    if family == "E2":
        return riemann_scheme(build_E2(*params).op)
    builder = {"H3": build_H3, "H4": build_H4, "H5": build_H5, "H6": build_H6}[family]
    return riemann_scheme(builder(params, u).op)
