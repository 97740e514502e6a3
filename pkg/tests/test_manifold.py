import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CHART, constants, polynomials
from hamlift.corpus import random_polynomial
from hamlift.errors import ChartMismatch
from hamlift.manifold import (
    CoordSystem,
    OneForm,
    Tensor11,
    TwoForm,
    VectorField,
    apply_tensor11,
    closedness_defects,
    differential,
    exterior_derivative_1,
    field_text,
    form_after_tensor,
    interior_product,
    pairing,
    wedge,
)
from hamlift.symcore import I, ONE, ZERO, T, var, z, zb

B = CoordSystem(1, 0)
Z, ZB = var(z(0, 1)), var(zb(0, 1))
PHI = TwoForm(B, {(zb(0, 1), z(0, 1)): -I})


@pytest.mark.parametrize("m, k", [(1, 0), (1, 2), (2, 1), (3, 3)])
def test_coordinate_count_and_order(m, k):
    chart = CoordSystem(m, k)
    coords = chart.enumerate()
    assert len(coords) == 2 * m * (k + 1) + 1 == chart.dimension
    assert list(coords) == sorted(coords)
    assert coords[0] == T


def test_invalid_chart():
    with pytest.raises(ValueError):
        CoordSystem(0, 1)
    with pytest.raises(ValueError):
        CoordSystem(1, -1)


def test_pairing_examples():
    assert pairing(OneForm.basis(B, T), VectorField.basis(B, T)) == ONE
    assert pairing(OneForm.basis(B, z(0, 1)), VectorField.basis(B, zb(0, 1))) == ZERO
    assert pairing(OneForm(B, {z(0, 1): ZB}), VectorField(B, {z(0, 1): Z})) == Z * ZB


def test_chart_discipline():
    with pytest.raises(ChartMismatch):
        VectorField(B, {z(1, 1): ONE})
    with pytest.raises(ChartMismatch):
        pairing(OneForm.basis(B, T), VectorField.basis(CHART, T))


def test_exterior_derivative_examples():
    d = exterior_derivative_1(OneForm(B, {z(0, 1): ZB}))
    assert d[(z(0, 1), zb(0, 1))] == -ONE
    assert d[(zb(0, 1), z(0, 1))] == ONE
    assert exterior_derivative_1(differential(Z * ZB, B)).is_zero
    assert exterior_derivative_1(OneForm.basis(B, T)).is_zero


def test_two_form_antisymmetry():
    w = wedge(OneForm.basis(B, zb(0, 1)), OneForm.basis(B, z(0, 1)))
    assert w == -wedge(OneForm.basis(B, z(0, 1)), OneForm.basis(B, zb(0, 1)))
    assert w[(zb(0, 1), z(0, 1))] == ONE
    # dc ^ dc = 0, so self-pairs are dropped
    assert TwoForm(B, {(z(0, 1), z(0, 1)): ONE}).is_zero


def test_interior_product_examples():
    assert interior_product(VectorField.basis(B, z(0, 1)), PHI) == OneForm(B, {zb(0, 1): I})
    assert interior_product(VectorField.basis(B, T), PHI).is_zero
    a, b = Z * Z, ZB + 1
    Zf = VectorField(B, {z(0, 1): a, zb(0, 1): b})
    assert interior_product(Zf, PHI) == OneForm(B, {z(0, 1): -I * b, zb(0, 1): I * a})


def test_tensor_examples():
    X = VectorField(B, {T: ONE, z(0, 1): Z, zb(0, 1): ZB * Z})
    assert apply_tensor11(Tensor11.identity(B), X) == X
    assert apply_tensor11(Tensor11(B), X).is_zero
    eta = OneForm(B, {T: ONE, zb(0, 1): ZB})
    xi = VectorField(B, {T: ONE, z(0, 1): Z})
    phi = Tensor11.outer(xi, eta) - Tensor11.identity(B)
    assert pairing(eta, xi) == ONE
    assert apply_tensor11(phi, xi).is_zero
    assert form_after_tensor(eta, phi).is_zero
    assert np.allclose(phi.matrix_at({T: 0, z(0, 1): 1, zb(0, 1): 2})[0], [0, 0, 2])


def test_field_text():
    X = VectorField(B, {T: ONE, z(0, 1): -ZB})
    assert field_text(X) == "d/dt + (-zb0_1)*d/dz0_1"
    assert field_text(VectorField(B)) == "0"


def _random_field(rng):
    return VectorField(CHART, {c: random_polynomial(rng, CHART.enumerate()) for c in CHART.enumerate()
                               if rng.random() < 0.6})


def _random_form(rng):
    return OneForm(CHART, {c: random_polynomial(rng, CHART.enumerate()) for c in CHART.enumerate()
                           if rng.random() < 0.6})


@given(polynomials)
def test_d_squared_zero(f):
    assert exterior_derivative_1(differential(f, CHART)).is_zero


@given(polynomials, st.integers(0, 10**6))
def test_pairing_with_differential_is_directional_derivative(f, seed):
    X = _random_field(random.Random(seed))
    assert pairing(differential(f, CHART), X) == X(f)


@given(constants, st.integers(0, 10**6))
def test_interior_product_linear(a, seed):
    rng = random.Random(seed)
    X, Y = _random_field(rng), _random_field(rng)
    phi = exterior_derivative_1(_random_form(rng))
    assert interior_product(X * a + Y, phi) == interior_product(X, phi) * a + interior_product(Y, phi)
    assert interior_product(X, phi * a) == interior_product(X, phi) * a


@given(st.integers(0, 10**6))
def test_exact_two_forms_are_closed(seed):
    assert closedness_defects(exterior_derivative_1(_random_form(random.Random(seed)))) == []


def test_closedness_detects_non_closed():
    w = TwoForm(B, {(z(0, 1), zb(0, 1)): var(T)})
    assert closedness_defects(w)
