from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hamlift.manifold import CoordSystem
from hamlift.symcore import CRational, const, exp, var

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

CHART = CoordSystem(1, 1)

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
crationals = st.builds(CRational, small, small)
constants = crationals.map(const)
coords = st.sampled_from(CHART.enumerate())
fiber_coords = st.sampled_from(CHART.fiber())
variables = coords.map(var)


def _combine(children):
    return st.one_of(
        st.tuples(children, children).map(lambda p: p[0] + p[1]),
        st.tuples(children, children).map(lambda p: p[0] - p[1]),
        st.tuples(children, children).map(lambda p: p[0] * p[1]),
        st.tuples(children, st.integers(0, 3)).map(lambda p: p[0] ** p[1]),
    )


polynomials = st.recursive(st.one_of(constants, variables), _combine, max_leaves=8)


def _with_exp(children):
    return st.one_of(
        _combine(children),
        children.map(lambda e: exp(e * const(Fraction(1, 4)))),
    )


# polynomials with exp factors; no quotients, so numerics stay well-posed
smooth = st.recursive(st.one_of(constants, variables), _with_exp, max_leaves=6)


def _with_quotients(children):
    return st.one_of(
        _combine(children),
        children.map(lambda e: exp(e * const(Fraction(1, 4)))),
        st.tuples(children, children).filter(lambda p: not p[1].is_zero).map(lambda p: p[0] / p[1]),
    )


expressions = st.recursive(st.one_of(constants, variables), _with_quotients, max_leaves=6)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
