import math

import numpy as np
import pytest

from compactcd.fd import (
    all_formulas,
    axis_derivative,
    derivative_table,
    mixed_derivative,
)
from compactcd.grid import make_grid, sample_scalar

ORDERS = (1, 2, 3, 4, 5)


@pytest.mark.parametrize("order", ORDERS)
def test_formula_rows_sum_to_zero(order):
    for offsets, coeffs in all_formulas(order):
        assert abs(sum(coeffs)) < 1e-13


@pytest.mark.parametrize("order", ORDERS)
def test_formula_reproduces_own_monomial(order):
    # Applying the stencil to x^order at x = 0 with h = 1 must give order!.
    for offsets, coeffs in all_formulas(order):
        val = sum(c * (o**order) for o, c in zip(offsets, coeffs))
        assert val == pytest.approx(math.factorial(order), rel=1e-12)


@pytest.mark.parametrize("order", ORDERS)
def test_formula_exact_to_degree_five(order):
    # Every listed formula annihilates/reproduces all monomials x^d, d <= 5,
    # about an arbitrary expansion point (here x0 = 0.3, h = 0.05).
    x0, h = 0.3, 0.05
    for offsets, coeffs in all_formulas(order):
        for d in range(6):
            exact = 0.0
            if d >= order:
                exact = (math.factorial(d) / math.factorial(d - order)
                         * x0 ** (d - order))
            val = sum(c * (x0 + o * h) ** d for o, c in zip(offsets, coeffs)) / h**order
            assert val == pytest.approx(exact, abs=5e-9), (order, offsets, d)


def test_quadratic_second_derivative_exact_interior():
    g = make_grid(16)
    f = sample_scalar(lambda x, y, t: x**2, g)
    d2 = axis_derivative(f, "x", 2)
    assert np.allclose(d2.values, 2.0, atol=1e-10)


def test_cubic_first_derivative_exact_at_left_edge():
    # At i = 0 the fully one-sided 6-point formula applies; it is exact on
    # degree-5 polynomials, so d/dx x^3 = 0 exactly at x = 0.
    g = make_grid(8)
    f = sample_scalar(lambda x, y, t: x**3, g)
    d1 = axis_derivative(f, "x", 1)
    assert abs(d1.values[0, 0]) < 1e-12
    assert np.allclose(d1.values, 3.0 * g.meshgrid()[0] ** 2, atol=1e-10)


def test_sin_first_derivative_accuracy():
    g = make_grid(128)
    f = sample_scalar(lambda x, y, t: np.sin(x), g)
    d1 = axis_derivative(f, "x", 1)
    X, _ = g.meshgrid()
    interior = np.abs(d1.values - np.cos(X))[2:-2, :]
    assert interior.max() < 5e-10


@pytest.mark.parametrize("order,min_rate", [(1, 4.5), (2, 3.5), (3, 2.5),
                                            (4, 1.5), (5, 0.5)])
def test_observed_convergence_rates(order, min_rate):
    errs = []
    for n in (64, 128):
        g = make_grid(n)
        f = sample_scalar(lambda x, y, t: np.sin(3.0 * x), g)
        d = axis_derivative(f, "x", order)
        X, _ = g.meshgrid()
        exact = 3.0**order * np.sin(3.0 * X + order * np.pi / 2)
        errs.append(np.abs(d.values - exact).max())
    rate = np.log2(errs[0] / errs[1])
    assert rate >= min_rate


def test_order_out_of_range_rejected():
    g = make_grid(8)
    f = sample_scalar(lambda x, y, t: x, g)
    with pytest.raises(ValueError):
        axis_derivative(f, "x", 6)
    with pytest.raises(ValueError):
        axis_derivative(f, "x", 0)


def test_mixed_polynomial_exact():
    g = make_grid(8)
    f = sample_scalar(lambda x, y, t: x**2 * y**2, g)
    d = mixed_derivative(f, 1, 1)
    X, Y = g.meshgrid()
    assert np.allclose(d.values, 4.0 * X * Y, atol=1e-9)


def test_mixed_identity():
    g = make_grid(8)
    f = sample_scalar(lambda x, y, t: np.sin(x + y), g)
    assert mixed_derivative(f, 0, 0) is f


def test_mixed_total_order_capped():
    g = make_grid(8)
    f = sample_scalar(lambda x, y, t: x, g)
    with pytest.raises(ValueError):
        mixed_derivative(f, 3, 3)


def test_mixed_trig_accuracy():
    g = make_grid(128)
    f = sample_scalar(lambda x, y, t: np.sin(x) * np.cos(y), g)
    d = mixed_derivative(f, 2, 1)
    X, Y = g.meshgrid()
    exact = -np.sin(X) * -np.sin(Y)
    assert np.abs(d.values - exact).max() < 1e-6


def test_mixed_pure_x_equals_axis_derivative():
    g = make_grid(16)
    f = sample_scalar(lambda x, y, t: np.exp(x) * np.cos(y), g)
    for m in (1, 2, 3):
        a = mixed_derivative(f, m, 0)
        b = axis_derivative(f, "x", m)
        assert np.array_equal(a.values, b.values)


def test_table_entry_counts():
    g = make_grid(8)
    f = sample_scalar(lambda x, y, t: x * y, g)
    assert len(derivative_table(f, 2).entries) == 6
    assert len(derivative_table(f, 4).entries) == 15
    t = derivative_table(f, 3)
    assert t[(0, 0)] is f


def test_table_constant_field_all_zero():
    g = make_grid(8)
    f = sample_scalar(lambda x, y, t: 4.2, g)
    t = derivative_table(f, 5)
    for key, entry in t.entries.items():
        if key != (0, 0):
            assert np.allclose(entry.values, 0.0, atol=1e-10)
