"""Exact-rational polynomial algebra and cutoff construction."""

from fractions import Fraction

import numpy as np
import pytest

from heatbound.polynomials import (
    CutoffSpec,
    Polynomial,
    gaussian_derivative_coeffs,
    hermite_polynomial,
    interpolating_cutoff,
    sup_derivative_norm,
)

# the published low-order ramps, ascending coefficients
KNOWN_RAMPS = {
    1: [0, 0, 3, -2],
    2: [0, 0, 0, 10, -15, 6],
    3: [0, 0, 0, 0, 35, -84, 70, -20],
    4: [0, 0, 0, 0, 0, 126, -420, 540, -315, 70],
}


def test_interpolating_cutoff_known_exact():
    for n, coeffs in KNOWN_RAMPS.items():
        got = interpolating_cutoff(n).base_polynomial.coefficients
        assert list(got) == [Fraction(c) for c in coeffs]


def test_interpolation_conditions_exact():
    for n in (1, 2, 3, 5, 6):
        p = interpolating_cutoff(n).base_polynomial
        assert p(Fraction(0)) == 0
        assert p(Fraction(1)) == 1
        for i in range(1, n + 1):
            di = p.derivative(i)
            assert di(Fraction(0)) == 0
            assert di(Fraction(1)) == 0


def test_ramp_symmetry_exact():
    # two-point interpolation with symmetric data: P(s) + P(1-s) = 1
    for n in (1, 2, 3, 4, 6):
        p = interpolating_cutoff(n).base_polynomial
        for k in range(11):
            s = Fraction(k, 10)
            assert p(s) + p(1 - s) == 1


def test_ramp_monotone_on_grid():
    for n in (1, 2, 4, 6):
        p = interpolating_cutoff(n).base_polynomial
        dp = p.derivative()
        xs = np.linspace(0.0, 1.0, 10_000)
        vals = np.array([dp(float(x)) for x in xs])
        # float Horner on alternating coefficients carries eps * sum|c| noise
        noise = 64 * np.finfo(float).eps * float(sum(abs(c) for c in dp.coefficients))
        assert np.all(vals >= -noise)


def test_hermite_examples():
    assert hermite_polynomial(0).coefficients == (Fraction(1),)
    assert list(hermite_polynomial(2).coefficients) == [Fraction(-2), Fraction(0), Fraction(4)]
    assert list(hermite_polynomial(3).coefficients) == [
        Fraction(0), Fraction(-12), Fraction(0), Fraction(8),
    ]


def test_hermite_recurrence_exact():
    # H_{n+1} = 2 s H_n - 2 n H_{n-1}
    two_s = Polynomial.from_coeffs([0, 2])
    for n in range(1, 12):
        lhs = hermite_polynomial(n + 1)
        rhs = two_s * hermite_polynomial(n) - hermite_polynomial(n - 1).scale(2 * n)
        assert lhs.coefficients == rhs.coefficients


def test_gaussian_derivative_coeffs_examples():
    assert gaussian_derivative_coeffs(0) == [(0, Fraction(1))]
    assert gaussian_derivative_coeffs(1) == [(0, Fraction(-1, 2))]
    assert gaussian_derivative_coeffs(2) == [(0, Fraction(1, 4)), (1, Fraction(-1, 2))]


def test_gaussian_derivative_coeffs_vs_finite_difference():
    import math

    t = 0.37
    s = 0.81
    h = 1e-3

    def g(u):
        return math.exp(-u * u / (4 * t))

    # 4th-order central stencils for the first two derivatives
    d1 = (g(s - 2 * h) - 8 * g(s - h) + 8 * g(s + h) - g(s + 2 * h)) / (12 * h)
    d2 = (-g(s + 2 * h) + 16 * g(s + h) - 30 * g(s) + 16 * g(s - h) - g(s - 2 * h)) / (12 * h * h)
    for n, ref in ((1, d1), (2, d2)):
        val = sum(float(c) * t ** (k - n) * s ** (n - 2 * k) for k, c in gaussian_derivative_coeffs(n)) * g(s)
        assert abs(val - ref) <= 1e-8 * max(1.0, abs(ref))


def test_sup_norm_known_values():
    p1 = interpolating_cutoff(1)
    assert p1.sup_norms[0] == 1.0
    assert p1.sup_norms[1] == 1.5
    p2 = interpolating_cutoff(2)
    assert p2.sup_norms[1] == 1.875  # 15/8 at s = 1/2


def test_sup_norm_upper_safe():
    # certified value dominates any sampling grid (up to the grid's own
    # float evaluation noise, eps * sum|c|)
    xs = np.linspace(0.0, 1.0, 20_001)
    for n in (2, 4, 6):
        spec = interpolating_cutoff(n)
        p = spec.base_polynomial
        for j in range(n + 1):
            dj = p.derivative(j)
            cs = np.array(dj.float_coeffs() or [0.0])
            grid_max = float(np.max(np.abs(np.polynomial.polynomial.polyval(xs, cs))))
            noise = 64 * np.finfo(float).eps * float(np.sum(np.abs(cs)))
            assert spec.sup_norms[j] >= grid_max - noise


def test_sup_norm_rejects_negative_order():
    with pytest.raises(ValueError):
        sup_derivative_norm(interpolating_cutoff(1).base_polynomial, -1)


def test_cutoff_spec_validation():
    bad = Polynomial.from_coeffs([0, 1])  # s: derivative does not vanish
    with pytest.raises(ValueError):
        CutoffSpec(base_polynomial=bad, smoothness_order=1)


def test_polynomial_arithmetic_exact():
    a = Polynomial.from_coeffs([1, 2, 3])
    b = Polynomial.from_coeffs([0, -1])
    assert (a * b).coefficients == (Fraction(0), Fraction(-1), Fraction(-2), Fraction(-3))
    assert (a + b).coefficients == (Fraction(1), Fraction(1), Fraction(3))
    assert a.derivative().coefficients == (Fraction(2), Fraction(6))
    assert a(Fraction(1, 2)) == Fraction(1) + 1 + Fraction(3, 4)
