import cmath
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import CHART, constants, coords, expressions, fiber_coords, polynomials, smooth
from hamlift.errors import DivisionByZero, UnboundCoordinate
from hamlift.symcore import (
    I,
    ONE,
    ZERO,
    CRational,
    T,
    compile_exprs,
    const,
    eval_numeric,
    exp,
    normalize,
    structurally_equal,
    substitute,
    to_text,
    var,
    wirtinger_derivative,
    z,
    zb,
)

Z, ZB, Z1 = var(z(0, 1)), var(zb(0, 1)), var(z(1, 1))
d = wirtinger_derivative


def test_coordinate_order():
    assert sorted([zb(1, 1), z(0, 2), T, z(1, 1), zb(0, 1), z(0, 1)]) == [
        T, z(0, 1), zb(0, 1), z(0, 2), z(1, 1), zb(1, 1)]
    assert z(0, 1).mirror() == zb(0, 1)
    assert str(zb(2, 3)) == "zb2_3"


def test_crational_printing():
    cases = {CRational(Fraction(-3, 2)): "-3/2", CRational(0, 1): "i", CRational(0, -1): "-i",
             CRational(0, 2): "2*i", CRational(1, -2): "1 - 2*i"}
    for q, text in cases.items():
        assert str(q) == text


def test_derivative_examples():
    assert d(Z * ZB, z(0, 1)) == ZB
    assert d(var(T), z(0, 1)) == ZERO
    assert d(Z ** 2 * ZB, zb(0, 1)) == Z ** 2
    assert d(ZB, z(0, 1)) == ZERO and d(Z, zb(0, 1)) == ZERO


def test_derivative_of_exp_and_quotient():
    assert d(exp(I * Z), z(0, 1)) == I * exp(I * Z)
    assert d(ONE / Z, z(0, 1)) == -(ONE / Z ** 2)
    assert d(ONE / (Z + ZB), zb(0, 1)) == -(ONE / (Z + ZB)) ** 2


def test_substitute_examples():
    assert substitute(Z + var(T), {z(0, 1): const(2)}) == var(T) + 2
    assert substitute(Z * ZB, {}) == Z * ZB
    assert substitute(Z, {z(0, 1): Z1}) == Z1
    # simultaneous, not sequential
    assert substitute(Z + Z1, {z(0, 1): Z1, z(1, 1): Z}) == Z + Z1


def test_eval_examples():
    assert eval_numeric(Z * ZB, {z(0, 1): 3 + 4j, zb(0, 1): 3 - 4j}) == 25 + 0j
    assert eval_numeric(I * Z, {z(0, 1): 1}) == 1j
    assert eval_numeric(exp(Z), {z(0, 1): 0}) == 1 + 0j


def test_eval_errors():
    with pytest.raises(UnboundCoordinate):
        eval_numeric(Z * ZB, {z(0, 1): 1})
    with pytest.raises(DivisionByZero):
        eval_numeric(ONE / (Z - 1), {z(0, 1): 1})


def test_structural_equality_examples():
    assert structurally_equal(Z + ZB, ZB + Z)
    assert structurally_equal((ONE / I) * Z, -I * Z)
    assert not structurally_equal(Z, ZB)


def test_canonical_text():
    assert to_text(Z * ZB) == "z0_1*zb0_1"
    assert to_text(-I * Z) == "(-i)*z0_1"
    assert to_text(ONE / (Z + ZB)) == "(z0_1 + zb0_1)^(-1)"
    assert to_text(Z ** 2 - Z / 2 + 3) == "3 - 1/2*z0_1 + z0_1^2"
    assert to_text(ZERO) == "0"


def test_constant_quotient_cancels():
    assert (Z + 1) / (2 * Z + 2) == const(Fraction(1, 2))


@given(constants, constants, polynomials, polynomials, coords)
def test_derivative_linear(a, b, e1, e2, c):
    assert d(a * e1 + b * e2, c) == a * d(e1, c) + b * d(e2, c)


@given(expressions, coords, coords)
def test_partials_commute(e, c1, c2):
    assert d(d(e, c1), c2) == d(d(e, c2), c1)


@given(expressions)
def test_normalize_idempotent(e):
    assert normalize(normalize(e)) == normalize(e)
    assert to_text(normalize(normalize(e))) == to_text(e)


@given(polynomials, polynomials)
def test_ring_laws(a, b):
    assert a * b == b * a
    assert (a + b) - b == a
    assert a * (a + b) == a * a + a * b


def _conjugate_point(rng):
    point = {T: complex(rng.uniform(-1, 1))}
    for c in CHART.fiber():
        if c.axis.name == "Z":
            w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            point[c] = w
            point[c.mirror()] = w.conjugate()
    return point


def _fd_wirtinger(e, c, point, h=1e-5):
    """(d/dx - i d/dy)/2 along c = x + iy with the mirror of c kept conjugate."""
    def f(dx, dy):
        p = dict(point)
        w = point[c] + complex(dx, dy)
        p[c] = w
        p[c.mirror()] = w.conjugate()
        return eval_numeric(e, p)

    fx = (f(h, 0) - f(-h, 0)) / (2 * h)
    fy = (f(0, h) - f(0, -h)) / (2 * h)
    return (fx - 1j * fy) / 2


@given(smooth, fiber_coords, st.integers(0, 10**6))
def test_derivative_matches_finite_differences(e, c, seed):
    point = _conjugate_point(random.Random(seed))
    exact = eval_numeric(d(e, c), point)
    approx = _fd_wirtinger(e, c, point)
    assume(all(cmath.isfinite(v) for v in (exact, approx)))
    assert abs(exact - approx) <= 1e-6 * max(1.0, abs(exact))


@given(expressions, st.integers(0, 10**6))
def test_compiled_matches_interpreted(e, seed):
    point = _conjugate_point(random.Random(seed))
    coords_ = CHART.enumerate()
    try:
        ref = eval_numeric(e, point)
    except (DivisionByZero, OverflowError):
        return
    got = compile_exprs([e], coords_)([point[c] for c in coords_])[0]
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))
