"""Pure-numpy batch evaluators for the one-dimensional kernel series.

All functions take equal-length float arrays and return an array of kernel
values.  Boundary signs: -1 encodes an absorbing (Dirichlet) reflector,
+1 a reflecting (Neumann) one.  These are the fallback implementations for
the numba-compiled versions in `_series_numba`; keep the two in sync.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

_SQRT_PI = np.sqrt(np.pi)


def gauss_1d(u: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Free 1-d kernel (4 pi t)^(-1/2) exp(-u^2/4t)."""
    return np.exp(-(u * u) / (4.0 * t)) / np.sqrt(4.0 * np.pi * t)


def halfline_batch(sign: float, sigma: float, x, y, t) -> np.ndarray:
    """Half-line kernel: images for D/N, closed form for the Robin wall.

    sign=-1 Dirichlet, sign=+1 Neumann; a Robin wall passes sign=+1 with
    sigma > 0 and subtracts the boundary-flux correction
    sigma * erfcx(B) * exp(-(x+y)^2/4t), B = (x+y)/(2 sqrt t) + sigma sqrt t.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    val = gauss_1d(x - y, t) + sign * gauss_1d(x + y, t)
    if sigma != 0.0:
        if sign != 1.0:
            raise ValueError("Robin correction applies to the reflecting sign")
        root_t = np.sqrt(t)
        b = (x + y) / (2.0 * root_t) + sigma * root_t
        val = val - sigma * _sp.erfcx(b) * np.exp(-((x + y) ** 2) / (4.0 * t))
    return val


def halfline_dev_batch(sign: float, sigma: float, x, y, t) -> np.ndarray:
    """Boundary part K - K_0 of the half-line kernel, cancellation-free."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    val = sign * gauss_1d(x + y, t)
    if sigma != 0.0:
        if sign != 1.0:
            raise ValueError("Robin correction applies to the reflecting sign")
        root_t = np.sqrt(t)
        b = (x + y) / (2.0 * root_t) + sigma * root_t
        val = val - sigma * _sp.erfcx(b) * np.exp(-((x + y) ** 2) / (4.0 * t))
    return val


def interval_images_batch(sign0: float, signL: float, x, y, t, L: float, nimg: int) -> np.ndarray:
    """Interval kernel by reflections: k in [-nimg, nimg].

    K = sum_k (sign0*signL)^k [ g(x - y - 2kL) + sign0 * g(x + y - 2kL) ].
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(x)
    prod = sign0 * signL
    for k in range(-nimg, nimg + 1):
        sk = prod**abs(k) if prod < 0 else 1.0
        shift = 2.0 * k * L
        out = out + sk * (gauss_1d(x - y - shift, t) + sign0 * gauss_1d(x + y - shift, t))
    return out


def interval_images_dev_batch(sign0: float, signL: float, x, y, t, L: float, nimg: int) -> np.ndarray:
    """Boundary part K - K_0 on the interval: reflections minus the k=0
    free image, summed directly so no large-term cancellation occurs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(x)
    prod = sign0 * signL
    for k in range(-nimg, nimg + 1):
        sk = prod**abs(k) if prod < 0 else 1.0
        shift = 2.0 * k * L
        term = sk * sign0 * gauss_1d(x + y - shift, t)
        if k != 0:
            term = term + sk * gauss_1d(x - y - shift, t)
        out = out + term
    return out


def interval_eigen_batch(sign0: float, signL: float, x, y, t, L: float, nterms: int) -> np.ndarray:
    """Interval kernel by eigenfunction expansion (pure D/N walls).

    Mode shapes by wall pair: DD sin(j pi x/L), NN cos(j pi x/L) plus the
    constant mode, DN sin((j+1/2) pi x/L), ND cos((j+1/2) pi x/L).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(x)
    if sign0 == 1.0 and signL == 1.0:
        out = out + 1.0 / L
    for j in range(nterms):
        if sign0 == -1.0 and signL == -1.0:
            w = (j + 1) * np.pi / L
            fx, fy = np.sin(w * x), np.sin(w * y)
        elif sign0 == 1.0 and signL == 1.0:
            w = (j + 1) * np.pi / L
            fx, fy = np.cos(w * x), np.cos(w * y)
        elif sign0 == -1.0 and signL == 1.0:
            w = (j + 0.5) * np.pi / L
            fx, fy = np.sin(w * x), np.sin(w * y)
        else:
            w = (j + 0.5) * np.pi / L
            fx, fy = np.cos(w * x), np.cos(w * y)
        out = out + (2.0 / L) * np.exp(-w * w * t) * fx * fy
    return out


def general_eigen_batch(omegas, amp_cos, amp_sin, x, y, t) -> np.ndarray:
    """Series sum over precomputed normalized modes a*cos(wx) + b*sin(wx).

    Used for Robin walls where the frequencies solve a secular equation.
    A zero frequency encodes the constant mode with amplitude amp_cos.
    """
    x = np.asarray(x, dtype=float)[None, :]
    y = np.asarray(y, dtype=float)[None, :]
    t = np.asarray(t, dtype=float)[None, :]
    w = np.asarray(omegas, dtype=float)[:, None]
    a = np.asarray(amp_cos, dtype=float)[:, None]
    b = np.asarray(amp_sin, dtype=float)[:, None]
    fx = a * np.cos(w * x) + b * np.sin(w * x)
    fy = a * np.cos(w * y) + b * np.sin(w * y)
    return np.sum(np.exp(-w * w * t) * fx * fy, axis=0)


def trace_sum(lambdas, mults, t: float) -> float:
    """Heat trace partial sum over an enumerated spectrum."""
    lam = np.asarray(lambdas, dtype=float)
    mu = np.asarray(mults, dtype=float)
    return float(mu @ np.exp(-lam * t))


def weighted_series_sum(lambdas, coeffs, t: float) -> float:
    """sum coeffs * exp(-lambdas * t), for the ball-center diagonals."""
    lam = np.asarray(lambdas, dtype=float)
    c = np.asarray(coeffs, dtype=float)
    return float(c @ np.exp(-lam * t))
