from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

small_q = st.fractions(min_value=-4, max_value=4, max_denominator=9)
nonint_q = st.builds(
    lambda p, q: Fraction(p, q),
    st.integers(-40, 40),
    st.sampled_from([7, 11, 13, 17, 19]),
).filter(lambda v: v.denominator != 1)


@st.composite
def polys(draw, max_deg=4):
    from fuchsian import UniPoly

    return UniPoly(draw(st.lists(small_q, max_size=max_deg + 1)))


@st.composite
def ops(draw, max_order=2, max_deg=2):
    from fuchsian import DiffOp

    return DiffOp(draw(st.lists(polys(max_deg), min_size=1, max_size=max_order + 1)))


@pytest.fixture
def x():
    from fuchsian import RatFunc

    return RatFunc.x()


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for crit in sorted(test_acceptance.RESULTS, key=int):
            terminalreporter.write_line(test_acceptance.RESULTS[crit])
