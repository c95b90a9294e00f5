import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import beta as beta_fn

from diskvolt.analytic import evaluate, power_kernel
from diskvolt.errors import DivergenceDetected
from diskvolt.quadrature import (ArcInterval, CarlesonSquareRegion, PseudoDisk, QuadratureConfig,
                                 integrate_disk, integrate_pseudo_disk, integrate_square,
                                 radial_weight)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 2.5])
def test_radial_weight_mass(alpha):
    value, err = integrate_disk(radial_weight(alpha))
    assert abs(value - 1 / (alpha + 1)) <= 1e-8 / (alpha + 1)
    assert err < 1e-6


def test_monomial_mass_against_beta():
    n, p, alpha = 3, 1.5, 0.5
    F = lambda z, w: np.abs(z) ** (n * p) * w ** alpha
    value, _ = integrate_disk(F)
    np.testing.assert_allclose(value.real, beta_fn(n * p / 2 + 1, alpha + 1), rtol=1e-8)


def test_constant_one_has_unit_mass():
    value, _ = integrate_disk(lambda z, w: np.ones_like(w))
    np.testing.assert_allclose(value.real, 1.0, rtol=1e-12)


@pytest.mark.parametrize("h", [1.0, 0.5, 0.125, 2.0 ** -10])
def test_carleson_square_area(h):
    value, _ = integrate_square(lambda z, w: np.ones_like(w), ArcInterval(0.3, h))
    np.testing.assert_allclose(value.real, h * (2 * h - h * h), rtol=1e-10)


def test_square_region_accepts_either_form():
    arc = ArcInterval(1.0, 0.25)
    a, _ = integrate_square(radial_weight(1.0), arc)
    b, _ = integrate_square(radial_weight(1.0), CarlesonSquareRegion(arc))
    assert a == b
    assert CarlesonSquareRegion(arc).radial_range == (0.75, 1.0)


def test_arc_validation():
    with pytest.raises(ValueError):
        ArcInterval(0.0, 0.0)
    with pytest.raises(ValueError):
        ArcInterval(0.0, 1.5)


def test_pseudo_disk_area():
    D = PseudoDisk(0.6, 0.5)
    value, _ = integrate_pseudo_disk(lambda z, w: np.ones_like(w), D)
    np.testing.assert_allclose(value.real, D.euclidean_radius ** 2, rtol=1e-10)
    assert abs(D.euclidean_center - 0.6) < 0.6


def test_singular_integrand_with_focus():
    # |1 - z|^-1 is integrable but singular at z = 1; compare against a finer rule
    f = power_kernel(1.0, 0.5)
    F = lambda z, w: np.abs(evaluate(f, z)) ** 2
    focused = integrate_disk(F, focus=[0.0])
    strict_cfg = QuadratureConfig(radial_levels=28, nodes_per_annulus=20, angular_nodes=128)
    reference = integrate_disk(F, strict_cfg, focus=[0.0])
    np.testing.assert_allclose(focused.value.real, reference.value.real, rtol=1e-7)
    assert not focused.diverged


def test_divergence_is_flagged():
    res = integrate_disk(lambda z, w: w ** -1.2)
    assert res.diverged
    assert math.isinf(res.error)
    with pytest.raises(DivergenceDetected):
        res.check(QuadratureConfig())


def test_radial_weight_rejects_nonintegrable_exponent():
    with pytest.raises(ValueError):
        radial_weight(-1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(radial_levels=2)
    with pytest.raises(ValueError):
        QuadratureConfig(angular_nodes=30)
    assert QuadratureConfig().to_dict()["radial_levels"] == 24


@settings(max_examples=20)
@given(st.floats(-0.9, 4.0))
def test_weight_mass_decreases_in_sigma(sigma):
    a, _ = integrate_disk(radial_weight(sigma))
    b, _ = integrate_disk(radial_weight(sigma + 0.1))
    assert b.real < a.real


@settings(max_examples=20)
@given(st.floats(0.05, 1.0), st.floats(0.0, 2 * math.pi))
def test_square_mass_is_rotation_invariant(h, theta):
    F = radial_weight(0.5)
    a, _ = integrate_square(F, ArcInterval(theta, h))
    b, _ = integrate_square(F, ArcInterval(0.0, h))
    np.testing.assert_allclose(a.real, b.real, rtol=1e-10)
