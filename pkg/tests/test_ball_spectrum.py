"""Spectrum enumeration, heat trace, and the weighted trace integral."""

import math

import numpy as np
import pytest

from heatbound.ball_spectrum import (
    build_spectrum,
    center_trace_comparison,
    load_spectrum_csv,
    neumann_trace,
    save_spectrum_csv,
    trace_weighted_integral,
)
from heatbound.special_functions import bessel_j_prime_zeros


def test_zero_mode_and_first_eigenvalue(disk_spectrum):
    assert disk_spectrum.lambdas[0] == 0.0
    assert disk_spectrum.mults[0] == 1
    assert abs(disk_spectrum.lambdas[1] - 1.84118378134066**2) <= 1e-8
    assert disk_spectrum.mults[1] == 2


def test_weyl_counting_at_large_level():
    # #{lam <= L} / (L/4) -> 1 for the unit disk
    table = build_spectrum(2, 10_000.0)
    ratio = table.counting(10_000.0) / (10_000.0 / 4.0)
    assert abs(ratio - 1.0) <= 0.03


def test_interlacing_no_gaps():
    # z_{n,k} < z_{n+1,k} < z_{n,k+1} guarantees the sweep misses nothing;
    # the 0-1 pair interlaces with roles swapped because the trivial zero
    # at the origin is excluded from order 0
    rows = {n: bessel_j_prime_zeros(n, 8) for n in range(6)}
    for k in range(7):
        assert rows[1][k] < rows[0][k] < rows[1][k + 1]
    for n in range(1, 5):
        for k in range(7):
            assert rows[n][k] < rows[n + 1][k] < rows[n][k + 1]


def test_trace_longtime_limit(disk_spectrum):
    v, err = neumann_trace(disk_spectrum, 50.0)
    assert abs(v - 1.0) <= 1e-12
    assert err <= 1e-12


def test_trace_monotone(disk_spectrum):
    ts = np.geomspace(0.02, 5.0, 12)
    vals = [neumann_trace(disk_spectrum, float(t))[0] for t in ts]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_trace_error_bound_is_true(disk_spectrum):
    # difference against a longer enumeration sits inside the reported bound
    bigger = build_spectrum(2, 8000.0)
    for t in (0.02, 0.05, 0.3):
        v1, e1 = neumann_trace(disk_spectrum, t)
        v2, _ = neumann_trace(bigger, t)
        assert abs(v2 - v1) <= e1 + 1e-13 * v1


def test_trace_rejects_unresolvable_time(disk_spectrum):
    with pytest.raises(ValueError):
        neumann_trace(disk_spectrum, 1e-4)


def test_trace_d2_value_with_tiny_error(disk_spectrum):
    v, err = neumann_trace(disk_spectrum, 1.0)
    assert err < 1e-12 * v
    # two-term short-time expansion is irrelevant here; sanity: above 1
    assert v > 1.0


def test_weighted_integral_brackets(disk_spectrum):
    lo_parts = []
    val = trace_weighted_integral(disk_spectrum, 2, tol=2e-3)
    # rebuilding with a larger horizon moves the value by less than tol
    bigger = build_spectrum(2, 8000.0)
    val2 = trace_weighted_integral(bigger, 2, tol=2e-3)
    assert abs(val - val2) <= 2e-3
    # upper bracket property: a denser enumeration only lowers the estimate
    assert val2 <= val + 1e-12


def test_weighted_integral_large_m_trend(disk_spectrum):
    # for large m the mass concentrates at t=1: integral ~ trace(1)/m
    tr1, _ = neumann_trace(disk_spectrum, 1.0)
    ratios = []
    for m in (5, 10, 20):
        val = trace_weighted_integral(disk_spectrum, m, tol=1e-3)
        ratios.append(val * m / tr1)
    assert ratios[0] > ratios[1] > ratios[2] > 1.0
    assert ratios[2] < 1.35


def test_weighted_integral_tolerance_error(ball_spectrum_small):
    with pytest.raises(ValueError):
        trace_weighted_integral(ball_spectrum_small, 2, tol=1e-6)


def test_weighted_integral_d3(ball_spectrum_small):
    val = trace_weighted_integral(ball_spectrum_small, 3, tol=5e-2)
    assert val > 0.0


def test_csv_round_trip(tmp_path, ball_spectrum_small):
    p = tmp_path / "spec.csv"
    save_spectrum_csv(ball_spectrum_small, p)
    back = load_spectrum_csv(p)
    assert back.dimension == 3
    assert np.allclose(back.lambdas, ball_spectrum_small.lambdas)
    assert np.array_equal(back.mults, ball_spectrum_small.mults)
    assert back.lambda_max == ball_spectrum_small.lambda_max


def test_center_trace_comparison(disk_spectrum):
    rows = center_trace_comparison(np.geomspace(0.02, 5.0, 30), disk_spectrum)
    assert len(rows) == 30
    for r in rows:
        assert r.ok
        assert r.rhs - r.lhs > r.lhs_err + r.rhs_err


def test_center_trace_gap_shrinks(disk_spectrum):
    rows = center_trace_comparison([0.5, 2.0, 5.0], disk_spectrum)
    gaps = [r.rhs - r.lhs for r in rows]
    assert gaps[0] > gaps[1] > gaps[2] > 0.0


def test_build_rejects_bad_dimension():
    with pytest.raises(ValueError):
        build_spectrum(4, 100.0)
