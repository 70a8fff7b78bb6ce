"""Constant assembly, cross-identities, and diagonal growth bounds."""

import math

import numpy as np
import pytest
import sympy

from heatbound.special_functions import beta
from heatbound.spectral_constants import (
    ConstantSet,
    DimensionParams,
    compute_constants,
    default_smoothing_order,
    free_green_diag,
    green_diag_bound,
    spectral_diag_bound,
)


def test_default_smoothing_order():
    assert [default_smoothing_order(d) for d in range(2, 9)] == [2, 2, 3, 3, 4, 4, 5]


def test_dimension_params_validation():
    with pytest.raises(ValueError):
        DimensionParams(d=1, m=2)
    with pytest.raises(ValueError):
        DimensionParams(d=4, m=2)  # m must exceed d/2 strictly


def test_c1_c3_known_values():
    c = compute_constants(DimensionParams(d=2, m=2))
    assert abs(c.c1 - 1.0 / (4.0 * math.pi)) <= 1e-15
    assert abs(c.c3 - 4.0 * 3.0**0.25) <= 1e-12


def test_c6_composition():
    # d=2, m=2: c6 = 2 c4 B(2,1) + 1/(4 pi), second term is the free Green diagonal
    p = DimensionParams(d=2, m=2)
    c = compute_constants(p)
    expect = 2.0 * c.c4 * beta(2.0, 1.0) + 1.0 / (4.0 * math.pi)
    assert abs(c.c6 - expect) <= 1e-14 * expect
    assert abs(free_green_diag(p) - 1.0 / (4.0 * math.pi)) <= 1e-15


def _constants_sympy(d: int, m: int) -> dict:
    """From-scratch symbolic assembly (exact gammas at half integers)."""
    md = sympy.ceiling(sympy.Rational(d + 1, 2))
    omega = sympy.pi ** sympy.Rational(d, 2) / sympy.gamma(sympy.Rational(d, 2) + 1)
    c1 = omega * (2 * sympy.pi) ** (-d)
    c3 = 2 * md * sympy.Integer(3) ** (sympy.Rational(1, 2 * md))
    c2 = d * c1 * (2 / sympy.pi * c3**2 + c3)
    c4 = c1 + sympy.Rational(d - 1, d) * 2 ** (d - 2) * c2
    c5 = 2 ** (d - 2) * c2 * (c3 ** (d - 1) + sympy.Rational(1, d))
    B = sympy.gamma(1 + sympy.Rational(d, 2)) * sympy.gamma(m - sympy.Rational(d, 2)) / sympy.gamma(m + 1)
    g0 = sympy.gamma(m - sympy.Rational(d, 2)) / ((4 * sympy.pi) ** sympy.Rational(d, 2) * sympy.factorial(m - 1))
    c6 = m * c4 * B + g0
    return {k: float(v.evalf(30)) for k, v in
            {"c1": c1, "c2": c2, "c3": c3, "c4": c4, "c5": c5, "c6": c6}.items()}


def test_constants_match_symbolic_rederivation():
    for d in range(2, 9):
        md = default_smoothing_order(d)
        for m in (md, md + 2):
            mine = compute_constants(DimensionParams(d=d, m=m)).as_dict()
            ref = _constants_sympy(d, m)
            for key, val in ref.items():
                assert abs(mine[key] - val) <= 1e-12 * abs(val), (d, m, key)


def test_green_diag_cross_identity():
    # m c1 B(1+d/2, m-d/2) equals the free Green diagonal
    for d in range(2, 7):
        md = default_smoothing_order(d)
        for m in range(md, md + 4):
            p = DimensionParams(d=d, m=m)
            c = compute_constants(p)
            lhs = m * c.c1 * beta(1.0 + d / 2.0, m - d / 2.0)
            rhs = free_green_diag(p)
            assert abs(lhs - rhs) <= 1e-12 * rhs


def test_sharp_below_simplified_on_grid():
    for d in (2, 3, 5):
        p = DimensionParams.with_default_m(d)
        for rho in np.geomspace(0.05, 20.0, 12):
            for lam in np.geomspace(0.01, 1e5, 12):
                sharp, simple = spectral_diag_bound(p, float(rho), float(lam))
                assert sharp <= simple * (1.0 + 1e-12)


def test_sharp_form_free_limit():
    # rho -> inf leaves only the phase-space term
    p = DimensionParams(d=3, m=2)
    c = compute_constants(p)
    lam = 7.3
    sharp, _ = spectral_diag_bound(p, 1e9, lam)
    assert abs(sharp - c.c1 * lam**1.5) <= 1e-6 * c.c1 * lam**1.5


def test_sharp_form_scaling_identity():
    # bound(rho, lam) = s^d * bound(s rho, lam / s^2)
    p = DimensionParams(d=4, m=3)
    s = 2.0
    for rho, lam in ((0.7, 11.0), (3.0, 0.9)):
        a, _ = spectral_diag_bound(p, rho, lam)
        b, _ = spectral_diag_bound(p, s * rho, lam / s**2)
        assert abs(a - s**p.d * b) <= 1e-12 * abs(a)


def test_sharp_monotonicity():
    p = DimensionParams(d=2, m=2)
    lams = np.geomspace(0.1, 100.0, 9)
    vals = [spectral_diag_bound(p, 1.0, float(l))[0] for l in lams]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    rhos = np.geomspace(0.1, 10.0, 9)
    vals = [spectral_diag_bound(p, float(r), 5.0)[0] for r in rhos]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_green_diag_bound_limits():
    p = DimensionParams(d=2, m=2)
    c = compute_constants(p)
    far = green_diag_bound(p, 1e8)
    expect = p.m * c.c4 * beta(2.0, 1.0)
    assert abs(far - expect) <= 1e-10 * expect
    # rho = 1: m c4 B + c5
    assert abs(green_diag_bound(p, 1.0) - (expect + c.c5)) <= 1e-12 * (expect + c.c5)
    # strictly decreasing in rho
    for rho in (0.3, 1.0, 4.0):
        assert green_diag_bound(p, 2.0 * rho) < green_diag_bound(p, rho)


def test_free_green_diag_d3():
    p = DimensionParams(d=3, m=2)
    expect = math.sqrt(math.pi) / (4.0 * math.pi) ** 1.5
    assert abs(free_green_diag(p) - expect) <= 1e-14 * expect


def test_constant_set_cached():
    a = compute_constants(DimensionParams(d=3, m=2))
    b = compute_constants(DimensionParams(d=3, m=2))
    assert a is b
    assert isinstance(a, ConstantSet)
