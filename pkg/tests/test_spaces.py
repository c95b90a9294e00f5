import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import beta as beta_fn

from diskvolt.analytic import constant, monomial, power_kernel, series
from diskvolt.spaces import (EvalKind, Regime, SpaceParams, bergman_norm, dirichlet_norm,
                             point_eval_norm, predicted_rate, weighted_integral)
from diskvolt.verdict import Truth


def test_space_params_validation():
    with pytest.raises(ValueError):
        SpaceParams(0.0, 0.0)
    with pytest.raises(ValueError):
        SpaceParams(2.0, -1.0)


@pytest.mark.parametrize("p, alpha, regime", [
    (1.0, 0.0, Regime.SUBCRITICAL),
    (2.0, 0.0, Regime.CRITICAL),
    (3.0, 1.0, Regime.CRITICAL),
    (3.0, 0.5, Regime.SUPERCRITICAL),
])
def test_regime_trichotomy(p, alpha, regime):
    assert SpaceParams(p, alpha).regime is regime


@pytest.mark.parametrize("n, p, alpha", [(1, 2.0, 0.0), (2, 1.0, 1.5), (4, 3.0, -0.5)])
def test_bergman_norm_of_monomial(n, p, alpha):
    res = bergman_norm(monomial(n), SpaceParams(p, alpha))
    exact = beta_fn(n * p / 2 + 1, alpha + 1) ** (1 / p)
    np.testing.assert_allclose(res.value, exact, rtol=1e-9)
    assert not res.diverged


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5])
def test_dirichlet_norm_of_z(alpha):
    res = dirichlet_norm(monomial(1), SpaceParams(2.0, alpha))
    np.testing.assert_allclose(res.value, (1 / (alpha + 1)) ** 0.5, rtol=1e-10)


def test_dirichlet_norm_of_constant():
    assert dirichlet_norm(constant(5.0), SpaceParams(2.0, 0.0)).value == pytest.approx(5.0)


def test_power_kernel_norm_diverges_past_threshold():
    sp = SpaceParams(2.0, 0.0)
    # |1 - z|^(-gamma p) is area-integrable iff gamma p < 2
    assert bergman_norm(power_kernel(1.0, 1.3), sp).diverged
    assert bergman_norm(power_kernel(1.0, 1.3), sp).finite() is Truth.FAILS
    ok = bergman_norm(power_kernel(1.0, 0.6), sp)
    assert not ok.diverged and ok.finite() is Truth.HOLDS


def test_norm_result_serializes():
    res = bergman_norm(monomial(1), SpaceParams(2.0, 0.0))
    d = json.loads(json.dumps(res.to_dict()))
    assert set(d) == {"value", "error", "diverged", "profile"}
    bad = bergman_norm(power_kernel(1.0, 2.0), SpaceParams(2.0, 0.0)).to_dict()
    assert bad["diverged"] and bad["error"] == "inf"


def test_weighted_integral_allows_any_weight():
    res = weighted_integral(monomial(1), 2.0, -1.5)
    assert res.diverged


def test_predicted_rates():
    z = 1 - 2.0 ** -5
    w = 1 - z * z
    assert predicted_rate(z, SpaceParams(1.0, 0.5)) == pytest.approx(w ** -1.5)
    assert predicted_rate(z, SpaceParams(2.0, 0.0)) == pytest.approx(math.log(2 / w) ** 0.5)
    assert predicted_rate(z, SpaceParams(3.0, 0.0)) == 1.0
    assert predicted_rate(z, SpaceParams(3.0, 0.0), EvalKind.DERIVATIVE) == pytest.approx(w ** (-2 / 3))


def test_point_eval_lower_bound_at_origin():
    bound, rate = point_eval_norm(0.0, SpaceParams(2.0, 0.0))
    assert bound == pytest.approx(1.0)
    assert rate == pytest.approx(math.log(2.0) ** 0.5)


def test_point_eval_bound_grows_toward_boundary():
    sp = SpaceParams(1.0, 0.5)
    values = [point_eval_norm(1 - 2.0 ** -k, sp)[0] for k in (3, 5, 7)]
    assert values[0] < values[1] < values[2]


@settings(max_examples=15)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_norm_is_homogeneous(c):
    sp = SpaceParams(1.5, 0.5)
    f = series([1.0, 0.5, -0.25j])
    np.testing.assert_allclose(dirichlet_norm(f * c, sp).value, abs(c) * dirichlet_norm(f, sp).value,
                               rtol=1e-9)


@settings(max_examples=15)
@given(st.floats(-0.5, 3.0), st.floats(0.0, 2.0))
def test_bergman_norm_decreases_with_weight(alpha, extra):
    f = series([1.0, 2.0, 1.0])
    a = bergman_norm(f, SpaceParams(2.0, alpha)).value
    b = bergman_norm(f, SpaceParams(2.0, alpha + extra + 0.05)).value
    assert b < a
