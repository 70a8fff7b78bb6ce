"""Numba-compiled batch evaluators for the one-dimensional kernel series.

Same contracts as `_series_numpy`; scalar inner loops compiled with
@njit(cache=True) so repeated sweep invocations skip recompilation.
erfcx is not available inside nopython code, so the Robin correction uses
a direct product for small arguments and a Lentz continued fraction above.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


@njit(cache=True)
def _erfcx(b: float) -> float:
    if b < 5.0:
        return math.exp(b * b) * math.erfc(b)
    # Modified Lentz on the classical continued fraction
    # sqrt(pi) * erfcx(b) = 1/(b + 1/(2b + 2/(b + 3/(2b + 4/(b + ...)))))
    tiny = 1e-300
    f = b
    c = b
    d = 0.0
    for i in range(1, 80):
        an = float(i)
        bn = 2.0 * b if i % 2 == 1 else b
        d = bn + an * d
        if d == 0.0:
            d = tiny
        c = bn + an / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return _INV_SQRT_PI / f


@njit(cache=True)
def _gauss_1d(u: float, t: float) -> float:
    return math.exp(-(u * u) / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)


@njit(cache=True)
def halfline_batch(sign: float, sigma: float, x, y, t):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        v = _gauss_1d(x[i] - y[i], t[i]) + sign * _gauss_1d(x[i] + y[i], t[i])
        if sigma != 0.0:
            rt = math.sqrt(t[i])
            b = (x[i] + y[i]) / (2.0 * rt) + sigma * rt
            v -= sigma * _erfcx(b) * math.exp(-((x[i] + y[i]) ** 2) / (4.0 * t[i]))
        out[i] = v
    return out


@njit(cache=True)
def halfline_dev_batch(sign: float, sigma: float, x, y, t):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        v = sign * _gauss_1d(x[i] + y[i], t[i])
        if sigma != 0.0:
            rt = math.sqrt(t[i])
            b = (x[i] + y[i]) / (2.0 * rt) + sigma * rt
            v -= sigma * _erfcx(b) * math.exp(-((x[i] + y[i]) ** 2) / (4.0 * t[i]))
        out[i] = v
    return out


@njit(cache=True)
def interval_images_batch(sign0: float, signL: float, x, y, t, L: float, nimg: int):
    out = np.zeros(x.shape[0])
    prod = sign0 * signL
    for i in range(x.shape[0]):
        acc = 0.0
        for k in range(-nimg, nimg + 1):
            sk = 1.0
            if prod < 0.0 and (k % 2 != 0):
                sk = -1.0
            shift = 2.0 * k * L
            acc += sk * (
                _gauss_1d(x[i] - y[i] - shift, t[i])
                + sign0 * _gauss_1d(x[i] + y[i] - shift, t[i])
            )
        out[i] = acc
    return out


@njit(cache=True)
def interval_images_dev_batch(sign0: float, signL: float, x, y, t, L: float, nimg: int):
    out = np.zeros(x.shape[0])
    prod = sign0 * signL
    for i in range(x.shape[0]):
        acc = 0.0
        for k in range(-nimg, nimg + 1):
            sk = 1.0
            if prod < 0.0 and (k % 2 != 0):
                sk = -1.0
            shift = 2.0 * k * L
            acc += sk * sign0 * _gauss_1d(x[i] + y[i] - shift, t[i])
            if k != 0:
                acc += sk * _gauss_1d(x[i] - y[i] - shift, t[i])
        out[i] = acc
    return out


@njit(cache=True)
def interval_eigen_batch(sign0: float, signL: float, x, y, t, L: float, nterms: int):
    out = np.zeros(x.shape[0])
    both_neumann = sign0 == 1.0 and signL == 1.0
    mixed = sign0 != signL
    use_sin = sign0 == -1.0
    for i in range(x.shape[0]):
        acc = 1.0 / L if both_neumann else 0.0
        for j in range(nterms):
            w = ((j + 0.5) if mixed else (j + 1.0)) * math.pi / L
            if use_sin:
                fx, fy = math.sin(w * x[i]), math.sin(w * y[i])
            else:
                fx, fy = math.cos(w * x[i]), math.cos(w * y[i])
            acc += (2.0 / L) * math.exp(-w * w * t[i]) * fx * fy
        out[i] = acc
    return out


@njit(cache=True)
def general_eigen_batch(omegas, amp_cos, amp_sin, x, y, t):
    out = np.zeros(x.shape[0])
    for i in range(x.shape[0]):
        acc = 0.0
        for j in range(omegas.shape[0]):
            w = omegas[j]
            fx = amp_cos[j] * math.cos(w * x[i]) + amp_sin[j] * math.sin(w * x[i])
            fy = amp_cos[j] * math.cos(w * y[i]) + amp_sin[j] * math.sin(w * y[i])
            acc += math.exp(-w * w * t[i]) * fx * fy
        out[i] = acc
    return out


@njit(cache=True)
def trace_sum(lambdas, mults, t: float) -> float:
    acc = 0.0
    for i in range(lambdas.shape[0]):
        acc += mults[i] * math.exp(-lambdas[i] * t)
    return acc


@njit(cache=True)
def weighted_series_sum(lambdas, coeffs, t: float) -> float:
    acc = 0.0
    for i in range(lambdas.shape[0]):
        acc += coeffs[i] * math.exp(-lambdas[i] * t)
    return acc
