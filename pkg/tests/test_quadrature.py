"""Adaptive embedded-rule quadrature against scipy references."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from heatbound.quadrature import QuadratureError, integrate


def test_smooth_gaussian():
    val, err = integrate(lambda s: np.exp(-(s**2)), -8.0, 8.0, atol=1e-13)
    assert abs(val - math.sqrt(math.pi)) <= 1e-12
    assert err <= 1e-12


def test_oscillatory():
    f = lambda s: np.sin(40.0 * s) * np.exp(-s)
    ref, _ = quad(lambda s: math.sin(40.0 * s) * math.exp(-s), 0.0, 3.0, limit=300)
    val, err = integrate(f, 0.0, 3.0, atol=1e-12)
    assert abs(val - ref) <= 1e-10


def test_kink_converges():
    # |s| has a kink; adaptive bisection still converges to the tolerance
    val, err = integrate(lambda s: np.abs(s), -1.0, 2.0, atol=1e-10)
    assert abs(val - 2.5) <= 1e-9


def test_empty_interval():
    assert integrate(lambda s: s, 1.0, 1.0, atol=1e-12) == (0.0, 0.0)


def test_budget_exhaustion_raises():
    # genuinely nasty integrand with a microscopic budget
    f = lambda s: np.abs(np.sin(1.0 / (s + 1e-4)))
    with pytest.raises(QuadratureError):
        integrate(f, 0.0, 1.0, atol=1e-15, max_intervals=8)


def test_polynomial_times_gaussian_high_accuracy():
    # the workload shape used by the localization oracle
    coeffs = np.array([0.3, -1.2, 2.0, 0.7, -0.4])
    t = 0.07

    def f(s):
        return np.polynomial.polynomial.polyval(s, coeffs) * np.exp(-(s * s) / (4 * t))

    ref, _ = quad(lambda s: float(f(np.array([s]))[0]), 0.2, 1.9, limit=200, epsabs=1e-15)
    val, err = integrate(f, 0.2, 1.9, atol=1e-14)
    assert abs(val - ref) <= 5e-13
