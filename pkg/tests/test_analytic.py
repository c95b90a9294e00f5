import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diskvolt.analytic import (DEFAULT_DEGREE, MAX_DEGREE, LogKernel, PowerKernel, Series,
                               antidifferentiate, coefficients, constant, differentiate, evaluate,
                               log_kernel, monomial, multiply, power_kernel, series,
                               singular_angles, tail_bound, truncate)
from diskvolt.errors import PoleOnPath, SlowDecayWarning, TruncationOverflow

coef = st.complex_numbers(max_magnitude=5.0, allow_nan=False, allow_infinity=False)
coef_lists = st.lists(coef, min_size=1, max_size=12)
disk_points = st.tuples(st.floats(0.0, 0.95), st.floats(0.0, 2 * math.pi)).map(
    lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))


def test_series_evaluates_by_horner():
    f = series([1, 2, 3])
    z = np.array([0.0, 0.5, -0.3j])
    np.testing.assert_allclose(evaluate(f, z), 1 + 2 * z + 3 * z ** 2)
    assert isinstance(evaluate(f, 0.5), complex)


def test_series_rejects_points_outside_disk():
    with pytest.raises(ValueError):
        evaluate(series([1, 1]), 1.5)


def test_power_kernel_closed_form_and_derivative():
    f = power_kernel(0.8, 1.5, 2.0)
    z = np.array([0.1, 0.3 + 0.4j, -0.9])
    np.testing.assert_allclose(evaluate(f, z), 2.0 * (1 - 0.8 * z) ** -1.5)
    np.testing.assert_allclose(evaluate(differentiate(f), z), 2.0 * 1.5 * 0.8 * (1 - 0.8 * z) ** -2.5)


def test_power_kernel_pole_raises():
    with pytest.raises(PoleOnPath):
        evaluate(power_kernel(1.0, 1.0), 1.0)


def test_log_kernel_value_and_derivative():
    f = log_kernel(0.5j, 2, 1.5)
    z = np.array([0.2, -0.4 + 0.1j])
    a = np.conj(0.5j)
    np.testing.assert_allclose(evaluate(f, z), 1.5 * np.log(2 / (1 - a * z)) ** 2)
    expected = 1.5 * 2 * np.log(2 / (1 - a * z)) * a / (1 - a * z)
    np.testing.assert_allclose(evaluate(differentiate(f), z), expected)


def test_power_kernel_taylor_matches_binomial_series():
    f = power_kernel(0.5, 2.0)
    # (1 - w)^-2 = sum (k+1) w^k with w = z/2
    k = np.arange(10)
    np.testing.assert_allclose(coefficients(f, 9), (k + 1) * 0.5 ** k)


def test_constant_derivative_is_zero():
    assert differentiate(constant(3.0)).is_zero
    assert differentiate(power_kernel(1.0, 0.0)).is_zero


def test_antiderivative_of_one_is_z():
    np.testing.assert_allclose(antidifferentiate(constant(1.0)).coeffs, [0, 1])


def test_antidifferentiate_closed_form_truncates_at_default_degree():
    f = antidifferentiate(power_kernel(0.5, 1.0))
    assert f.degree == DEFAULT_DEGREE + 1
    assert evaluate(f, 0.0) == 0
    np.testing.assert_allclose(evaluate(f, 0.3), -2 * np.log(1 - 0.15), rtol=1e-12)


def test_truncation_overflow():
    with pytest.raises(TruncationOverflow):
        antidifferentiate(power_kernel(0.5, 1.0), MAX_DEGREE + 1)


def test_truncate_reports_tail_bound():
    f = power_kernel(0.5, 1.0)
    s, bound = truncate(f, 40)
    assert bound == pytest.approx(tail_bound(f, 40))
    # tail of sum (z/2)^k at r = 0.9 beyond degree 40
    exact = 0.45 ** 41 / (1 - 0.45)
    assert bound >= 0.99 * exact
    np.testing.assert_allclose(evaluate(s, 0.3), evaluate(f, 0.3), atol=bound)


def test_truncate_warns_on_slow_decay():
    with pytest.warns(SlowDecayWarning):
        truncate(power_kernel(1.0, 1.0), 10)


def test_truncated_series_warns_beyond_diagnostic_radius():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SlowDecayWarning)
        s, _ = truncate(power_kernel(1.0, 1.0), 10)
    with pytest.warns(SlowDecayWarning):
        evaluate(s, 0.99)


def test_singular_angles():
    f = power_kernel(1j, 1.0) + log_kernel(-1.0, 1) + power_kernel(0.2, 3.0)
    np.testing.assert_allclose(sorted(singular_angles(f)), [math.pi / 2, math.pi])
    assert singular_angles(series([1, 2])) == ()


def test_product_rule():
    f = power_kernel(0.7, 0.5) * log_kernel(0.3, 1)
    z = 0.2 + 0.1j
    h = 1e-6
    numeric = (evaluate(f, z + h) - evaluate(f, z - h)) / (2 * h)
    assert abs(evaluate(differentiate(f), z) - numeric) < 1e-6


def test_symbols_are_readable():
    assert monomial(1).to_symbol() == "poly(0.0,1.0)"
    assert power_kernel(1, 0.4).to_symbol() == "pow(a=1.0,gamma=0.4,c=1.0)"


@given(coef_lists, coef_lists)
def test_multiply_is_commutative(a, b):
    f, g = series(a), series(b)
    n = len(a) + len(b)
    np.testing.assert_allclose(multiply(f, g, n).coeffs, multiply(g, f, n).coeffs, atol=1e-12)


@given(coef_lists)
def test_differentiate_undoes_antidifferentiate(a):
    f = series(a)
    np.testing.assert_allclose(differentiate(antidifferentiate(f)).coeffs, f.coeffs, atol=1e-12)


@given(coef_lists, coef_lists, coef)
def test_antidifferentiate_is_linear(a, b, c):
    f, g = series(a), series(b)
    lhs = antidifferentiate(f + g * c)
    rhs = antidifferentiate(f) + antidifferentiate(g) * c
    n = max(len(a), len(b)) + 1
    np.testing.assert_allclose(coefficients(lhs, n), coefficients(rhs, n), atol=1e-12)


@given(coef_lists, disk_points)
def test_series_value_equals_product_with_one(a, z):
    f = series(a)
    np.testing.assert_allclose(evaluate(multiply(f, constant(1.0), len(a)), z), evaluate(f, z),
                               atol=1e-10)


@settings(max_examples=30)
@given(st.floats(0.1, 0.9), st.floats(-1.5, 3.0), disk_points)
def test_power_kernel_taylor_converges(r, gamma, z):
    f = power_kernel(r, gamma)
    c = coefficients(f, 400)
    value = np.polyval(c[::-1], z)
    np.testing.assert_allclose(value, evaluate(f, z), rtol=1e-8, atol=1e-10)
