"""Real special functions used by every other module.

Thin, validated wrappers: gamma/erfc come from the C math library, the
incomplete gamma and Bessel families from scipy.special.  Every wrapper
rejects arguments outside the domain actually used by the bound formulas
(positive gamma arguments, non-negative Bessel orders), so downstream code
never has to reason about branch cuts or negative-axis conventions.

Bessel-derivative zeros are found by sign-change scanning on a grid finer
than the minimal zero spacing, followed by Brent refinement; each returned
zero is certified by a residual check.  Tables are built once per spectrum,
so robustness beats speed here.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize
from scipy import special as _sp

__all__ = [
    "gamma",
    "beta",
    "upper_incomplete_gamma",
    "erfc",
    "erfcx",
    "unit_ball_volume",
    "bessel_j",
    "bessel_j_prime",
    "spherical_bessel_j",
    "spherical_bessel_j_prime",
    "bessel_j_prime_zeros",
    "spherical_bessel_j_prime_zeros",
]


def _require_finite(name: str, x: float) -> float:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return x


def gamma(x: float) -> float:
    """Gamma function on the positive half line."""
    x = _require_finite("x", x)
    if x <= 0.0:
        raise ValueError(f"gamma requires x > 0, got {x}")
    return math.gamma(x)


def beta(a: float, b: float) -> float:
    """Classical Beta function B(a, b) for positive arguments.

    Computed through log-gamma so that large arguments do not overflow
    before the quotient is taken.
    """
    a = _require_finite("a", a)
    b = _require_finite("b", b)
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"beta requires a, b > 0, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def upper_incomplete_gamma(a: float, r: float) -> float:
    """Non-regularized upper incomplete gamma integral over [r, inf)."""
    a = _require_finite("a", a)
    r = _require_finite("r", r)
    if a <= 0.0:
        raise ValueError(f"upper_incomplete_gamma requires a > 0, got {a}")
    if r < 0.0:
        raise ValueError(f"upper_incomplete_gamma requires r >= 0, got {r}")
    # scipy's gammaincc is the regularized ratio Gamma(a, r) / Gamma(a).
    return float(_sp.gammaincc(a, r)) * math.gamma(a)


def erfc(x: float) -> float:
    """Complementary error function."""
    return math.erfc(_require_finite("x", x))


def erfcx(x: float) -> float:
    """Scaled complementary error function exp(x^2) * erfc(x)."""
    return float(_sp.erfcx(_require_finite("x", x)))


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in dimension d."""
    d = int(d)
    if d < 1:
        raise ValueError(f"unit_ball_volume requires d >= 1, got {d}")
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def bessel_j(n: int, x) -> float | np.ndarray:
    """Bessel function of the first kind, integer order n >= 0."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    return _sp.jv(n, x)


def bessel_j_prime(n: int, x) -> float | np.ndarray:
    """First derivative of J_n."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    return _sp.jvp(n, x)


def spherical_bessel_j(n: int, x) -> float | np.ndarray:
    """Spherical Bessel function j_n (dimension-3 radial modes)."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    return _sp.spherical_jn(n, x)


def spherical_bessel_j_prime(n: int, x) -> float | np.ndarray:
    """First derivative of the spherical Bessel function j_n."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    return _sp.spherical_jn(n, x, derivative=True)


def _scan_zeros(f_vec, count: int, x_min: float, x_hint: float, step: float = 0.5) -> list[float]:
    """First `count` zeros of f above x_min via grid sign changes + Brent.

    Consecutive zeros of the functions handled here (derivatives of Bessel
    and spherical Bessel functions) are separated by more than 2, so a grid
    step of 0.5 cannot straddle two zeros in one cell.  `x_hint` estimates
    where the first zero lives, sizing the initial scan window.
    """
    zeros: list[float] = []
    lo = x_min
    hi = x_hint + (count + 2) * math.pi
    rounds = 0
    while len(zeros) < count:
        xs = np.arange(lo, hi + step, step)
        xs[0] = max(xs[0], x_min)
        vals = np.asarray(f_vec(xs), dtype=float)
        for i in range(len(xs) - 1):
            if len(zeros) >= count:
                break
            a, b = float(xs[i]), float(xs[i + 1])
            fa, fb = float(vals[i]), float(vals[i + 1])
            if fa == 0.0:
                root = a
            elif fa * fb < 0.0:
                root = optimize.brentq(
                    lambda x: float(f_vec(x)), a, b, xtol=1e-13, rtol=8.9e-16
                )
            else:
                continue
            if root > x_min and (not zeros or root > zeros[-1] + 1e-9):
                zeros.append(float(root))
        lo = hi
        hi += (count - len(zeros) + 2) * math.pi
        rounds += 1
        if rounds > 50:
            raise RuntimeError("zero scan failed to converge")
    return zeros[:count]


def bessel_j_prime_zeros(n: int, count: int) -> list[float]:
    """First `count` positive zeros of J_n', strictly increasing.

    For n = 0 the stationary point at x = 0 is excluded, so the first
    returned zero is j'_{0,1} = j_{1,1} (J_0' = -J_1).
    """
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    f = lambda x: _sp.jvp(n, x)
    # J_n rises from the origin to its first maximum, so J_n' > 0 below the
    # first zero near n + 0.81 n^(1/3); start the scan shortly before it.
    hint = n + 0.8086165 * n ** (1.0 / 3.0) if n > 0 else 1.8
    start = max(1e-6, 0.5 * hint)
    zeros = _scan_zeros(f, count, start, hint)
    for z in zeros:
        if abs(float(f(z))) > 1e-10:
            raise RuntimeError(f"zero of J_{n}' at {z} failed residual check")
    return zeros


def spherical_bessel_j_prime_zeros(n: int, count: int) -> list[float]:
    """First `count` positive zeros of the spherical j_n' (d = 3 modes)."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    f = lambda x: _sp.spherical_jn(n, np.asarray(x, dtype=float), derivative=True)
    hint = n + 1.1 * n ** (1.0 / 3.0) + 1.0 if n > 0 else 4.49
    start = max(1e-6, 0.5 * hint)
    zeros = _scan_zeros(f, count, start, hint)
    for z in zeros:
        if abs(float(f(z))) > 1e-10:
            raise RuntimeError(f"zero of j_{n}' at {z} failed residual check")
    return zeros
