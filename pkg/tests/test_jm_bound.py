"""Localization-cost machinery: closed form vs independent oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from scipy.integrate import quad

from heatbound.jm_bound import (
    EpsilonSchedule,
    JmQuery,
    gaussian_tail_bound,
    jm_closed_form_bound,
    jm_laurent_coefficients,
    jm_numeric_oracle,
    z_function,
    z_laurent_coefficients,
)
from heatbound.polynomials import interpolating_cutoff


def _query(m, R, t):
    return JmQuery(m=m, R=R, t=t, cutoff=interpolating_cutoff(2 * m))


def test_z_function_order_zero_closed_form():
    cutoff = interpolating_cutoff(4)
    for R, t in ((1.0, 0.1), (2.0, 0.33), (0.5, 0.01)):
        expect = 2.0 * cutoff.sup_norms[0] * math.e**2 * t / R
        assert abs(z_function(0, cutoff, R, t) - expect) <= 1e-14 * expect


def _z_sympy(n, cutoff, R, t):
    """The displayed double sum, assembled independently in exact sympy."""
    Rs, ts = sympy.Rational(R), sympy.Rational(t)
    M = [sympy.Rational(Fraction(v)) for v in cutoff.sup_norms]
    e = sympy.E
    total = sympy.Integer(0)
    for k in range(n // 2 + 1):
        num = (
            sympy.factorial(n)
            * sympy.factorial(sympy.ceiling(sympy.Rational(n - 2 * k - 1, 2)))
            * M[0] * e**2 * Rs ** (n - 2 * k - 1)
        )
        den = 2 ** (2 * n - 2 * k - 1) * sympy.factorial(k) * sympy.factorial(n - 2 * k)
        total += num / den * ts ** (1 + k - n)
    for j in range(n):
        for k in range(j // 2 + 1):
            num = sympy.factorial(n) * M[n - j] * e * Rs ** (n - 2 * k - 1)
            den = (
                2 ** (n - 2) * sympy.factorial(k)
                * sympy.factorial(j - 2 * k) * sympy.factorial(n - j)
            )
            total += num / den * ts ** (1 + k - n)
    return float(total.evalf(30))


def test_z_function_against_symbolic_expansion():
    cutoff = interpolating_cutoff(4)
    for n in range(0, 5):
        for R, t in ((1.0, 0.125), (2.0, 0.03125), (0.5, 0.02)):
            mine = z_function(n, cutoff, R, t)
            ref = _z_sympy(n, cutoff, R, t)
            assert abs(mine - ref) <= 1e-12 * abs(ref), (n, R, t)


def test_z_laurent_exponent_set():
    cutoff = interpolating_cutoff(4)
    for n in range(5):
        powers = set(z_laurent_coefficients(n, cutoff, 1.3).keys())
        assert powers == {1 + k - n for k in range(n // 2 + 1)}


def test_z_positive_and_monotone_in_sup_norms():
    from heatbound.polynomials import CutoffSpec

    base = interpolating_cutoff(4)
    doubled = CutoffSpec(
        base_polynomial=base.base_polynomial,
        smoothness_order=base.smoothness_order,
        sup_norms=(1.0,) + tuple(2.0 * v for v in base.sup_norms[1:]),
    )
    for n in range(1, 5):
        z1 = z_function(n, base, 1.0, 0.1)
        z2 = z_function(n, doubled, 1.0, 0.1)
        assert z1 > 0.0
        assert z2 >= z1


def test_z_requires_sup_norms():
    cutoff = interpolating_cutoff(2)
    with pytest.raises(ValueError):
        z_function(3, cutoff, 1.0, 0.1)


def test_closed_form_window():
    q = _query(2, 2.0, 0.6)
    with pytest.raises(ValueError):
        jm_closed_form_bound(q)
    # boundary case t = R^2/8 included
    assert jm_closed_form_bound(_query(2, 2.0, 0.5)) > 0.0


def test_closed_form_vanishes_as_t_to_zero():
    # the Gaussian beats every negative power
    R = 2.0
    small = jm_closed_form_bound(_query(2, R, R * R / 100.0))
    at_boundary = jm_closed_form_bound(_query(2, R, R * R / 8.0))
    assert 0.0 < small < 1e-6 * at_boundary


def test_laurent_interpolation_recovers_coefficients():
    # evaluating the stripped bound at distinct times and solving the
    # Vandermonde system must reproduce the assembled coefficients
    cutoff = interpolating_cutoff(4)
    coeffs = jm_laurent_coefficients(2, cutoff, 1.7)
    powers = sorted(coeffs)
    ts = np.geomspace(0.05, 0.3, len(powers))
    A = np.array([[t**p for p in powers] for t in ts])
    vals = np.array([sum(c * t**p for p, c in coeffs.items()) for t in ts])
    sol = np.linalg.solve(A, vals)
    ref = np.array([coeffs[p] for p in powers])
    assert np.allclose(sol, ref, rtol=1e-7)


def test_oracle_below_closed_form_spot():
    q = _query(2, 2.0, 0.25)
    sched = EpsilonSchedule.for_query(q, 0.99 * q.R)
    assert jm_numeric_oracle(q, sched) <= jm_closed_form_bound(q) * (1.0 + 1e-6)


def test_oracle_order_zero_gaussian_mass():
    # with no smoothing the integral is below the full Gaussian mass
    cutoff = interpolating_cutoff(4)
    for t in (0.05, 0.2):
        q = JmQuery(m=0, R=2.0, t=t, cutoff=cutoff)
        sched = EpsilonSchedule.for_query(q, 1.9)
        val = jm_numeric_oracle(q, sched)
        assert 0.0 < val <= 2.0 * math.sqrt(math.pi * t) * (1.0 + 1e-12)


def test_oracle_against_brute_force_quadrature():
    # direct finite-difference-free evaluation: assemble the smoothed
    # integrand pointwise from the ramp and Gaussian derivatives via
    # sympy, integrate with scipy on each piece
    m, R, t = 2, 1.0, 0.1
    cutoff = interpolating_cutoff(2 * m)
    q = JmQuery(m=m, R=R, t=t, cutoff=cutoff)
    sched = EpsilonSchedule.for_query(q, 0.9 * R)
    s = sympy.symbols("s", positive=True)
    delta = sched.eps2 - sched.eps1
    ramp = sum(
        sympy.Rational(c) * ((s - sympy.Rational(sched.eps1)) / sympy.nsimplify(delta, rational=True)) ** i
        for i, c in enumerate(cutoff.base_polynomial.coefficients)
    )
    g = sympy.exp(-(s**2) / (4 * sympy.nsimplify(t, rational=True)))
    # (1 - d^2/ds^2)^2 = 1 - 2 d^2/ds^2 + d^4/ds^4
    expr_mid = ramp * g - 2 * sympy.diff(ramp * g, s, 2) + sympy.diff(ramp * g, s, 4)
    f_mid = sympy.lambdify(s, expr_mid, "numpy")
    expr_out = g - 2 * sympy.diff(g, s, 2) + sympy.diff(g, s, 4)
    f_out = sympy.lambdify(s, expr_out, "numpy")
    mid, _ = quad(lambda x: abs(f_mid(x)), sched.eps1, sched.eps2, limit=300, epsabs=1e-14)
    out, _ = quad(lambda x: abs(f_out(x)), sched.eps2, 60.0, limit=300, epsabs=1e-14)
    ref = 2.0 * (mid + out)
    mine = jm_numeric_oracle(q, sched)
    assert abs(mine - ref) <= 1e-8 * ref


def test_schedule_validation():
    q = _query(2, 1.0, 0.1)
    with pytest.raises(ValueError):
        EpsilonSchedule.for_query(q, 0.15)  # eps1 would be negative
    with pytest.raises(ValueError):
        EpsilonSchedule.for_query(q, 1.5)  # eps2 beyond the ramp width


def test_gaussian_tail_examples():
    lhs, rhs = gaussian_tail_bound(0, 2.0, 1.0)
    assert abs(lhs - math.sqrt(math.pi) * math.erfc(1.0)) <= 1e-12
    assert abs(rhs - 1.0) <= 1e-12
    assert lhs <= rhs


def test_gaussian_tail_beta_one_exact():
    for rho, t in ((2.0, 1.0), (3.0, 0.5), (1.0, 0.25)):
        lhs, rhs = gaussian_tail_bound(1, rho, t)
        exact = 2.0 * t * math.exp(-rho * rho / (4.0 * t))
        assert abs(lhs - exact) <= 1e-12 * exact
        assert abs(rhs / lhs - math.e) <= 1e-12 * math.e


def test_gaussian_tail_quadrature_sweep(rng):
    for beta in range(9):
        for _ in range(20):
            t = float(10 ** rng.uniform(-2.0, 1.0))
            rho = 2.0 * math.sqrt(t) * float(10 ** rng.uniform(0.0, 0.8))
            lhs, rhs = gaussian_tail_bound(beta, rho, t)
            ref, ref_err = quad(
                lambda s_: s_**beta * math.exp(-s_ * s_ / (4.0 * t)),
                rho, rho + 40.0 * math.sqrt(t), limit=200, epsabs=0.0, epsrel=1e-12,
            )
            assert abs(lhs - ref) <= 1e-9 * ref + 2.0 * ref_err
            assert lhs <= rhs


def test_gaussian_tail_precondition():
    with pytest.raises(ValueError):
        gaussian_tail_bound(2, 0.5, 1.0)  # rho < 2 sqrt(t)
