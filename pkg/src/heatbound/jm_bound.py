"""Localization cost of the Gaussian under high-order smoothing.

The central quantity is the L1 norm of (1 - d^2/ds^2)^m applied to a
cut-off Gaussian psi(s) * exp(-s^2/4t), where psi ramps from 0 to 1 inside
(-R, R).  Two routes are provided:

* a closed-form upper bound, a binomial sum of explicit Laurent polynomials
  in t times exp(-R^2/4t), valid for 0 < t <= R^2/8;
* a numeric oracle that assembles the integrand exactly (polynomial times
  Gaussian on each piece) for a concrete ramp placement and integrates it
  with sign-resolved adaptive quadrature plus closed-form Gaussian moments
  on the outer tail.

The oracle exists to certify the closed form; it shares no algebra with it
beyond the ramp polynomial itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import quadrature
from .polynomials import CutoffSpec, gaussian_derivative_coeffs
from .special_functions import upper_incomplete_gamma

__all__ = [
    "JmQuery",
    "EpsilonSchedule",
    "z_function",
    "z_laurent_coefficients",
    "jm_closed_form_bound",
    "jm_laurent_coefficients",
    "jm_numeric_oracle",
    "gaussian_tail_bound",
]


@dataclass(frozen=True)
class JmQuery:
    """One localization query: smoothing order m, ramp width R, time t."""

    m: int
    R: float
    t: float
    cutoff: CutoffSpec

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if not (self.R > 0.0):
            raise ValueError(f"R must be positive, got {self.R}")
        if not (self.t > 0.0):
            raise ValueError(f"t must be positive, got {self.t}")


@dataclass(frozen=True)
class EpsilonSchedule:
    """Ramp placement: transition on [eps1, eps2] with width 2t/R."""

    eps1: float
    eps2: float

    @classmethod
    def for_query(cls, q: JmQuery, eps2: float) -> "EpsilonSchedule":
        eps1 = eps2 - 2.0 * q.t / q.R
        sched = cls(eps1=eps1, eps2=eps2)
        sched.validate(q.R)
        return sched

    def validate(self, R: float) -> None:
        if not (0.0 < self.eps1 < self.eps2 < R):
            raise ValueError(
                f"need 0 < eps1 < eps2 < R, got eps1={self.eps1}, eps2={self.eps2}, R={R}"
            )


def z_laurent_coefficients(n: int, cutoff: CutoffSpec, R: float) -> dict[int, float]:
    """Coefficients of the localization-cost Laurent polynomial in t.

    Returns {p: c} meaning the value at time t is sum_p c * t**p, with
    p = 1 + k - n for k = 0..floor(n/2).  All coefficients are positive.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    M = cutoff.sup_norms
    if len(M) <= n:
        raise ValueError(
            f"cutoff carries sup norms up to order {len(M) - 1}, need order {n}"
        )
    e1, e2 = math.e, math.e**2
    coeffs: dict[int, float] = {}
    for k in range(n // 2 + 1):
        num = (
            math.factorial(n)
            * math.factorial(math.ceil((n - 2 * k - 1) / 2))
            * M[0]
            * e2
            * R ** (n - 2 * k - 1)
        )
        den = 2.0 ** (2 * n - 2 * k - 1) * math.factorial(k) * math.factorial(n - 2 * k)
        coeffs[1 + k - n] = coeffs.get(1 + k - n, 0.0) + num / den
    for j in range(n):
        for k in range(j // 2 + 1):
            num = math.factorial(n) * M[n - j] * e1 * R ** (n - 2 * k - 1)
            den = (
                2.0 ** (n - 2)
                * math.factorial(k)
                * math.factorial(j - 2 * k)
                * math.factorial(n - j)
            )
            coeffs[1 + k - n] = coeffs.get(1 + k - n, 0.0) + num / den
    return coeffs


def z_function(n: int, cutoff: CutoffSpec, R: float, t: float) -> float:
    """Evaluate the localization-cost rational function at time t."""
    if not (R > 0.0 and t > 0.0):
        raise ValueError(f"R and t must be positive, got R={R}, t={t}")
    return sum(c * t**p for p, c in z_laurent_coefficients(n, cutoff, R).items())


def jm_laurent_coefficients(m: int, cutoff: CutoffSpec, R: float) -> dict[int, float]:
    """Laurent coefficients of the full order-m bound before the Gaussian."""
    out: dict[int, float] = {}
    for n in range(m + 1):
        binom = math.comb(m, n)
        for p, c in z_laurent_coefficients(2 * n, cutoff, R).items():
            out[p] = out.get(p, 0.0) + binom * c
    return out


def jm_closed_form_bound(q: JmQuery) -> float:
    """Closed-form upper bound on the order-m localization cost.

    Only asserted for 0 < t <= R^2/8; outside that window the hypothesis is
    violated and a ValueError is raised rather than returning a number that
    bounds nothing.
    """
    limit = q.R * q.R / 8.0
    # ulp-level slack: t = R^2/8 must stay admissible whichever rounding
    # route (pow vs multiply) produced it
    if q.t > limit * (1.0 + 4.0 * 2.220446049250313e-16):
        raise ValueError(f"closed form requires t <= R^2/8: t={q.t} > {limit}")
    if q.m < 1:
        raise ValueError(f"closed form requires m >= 1, got {q.m}")
    poly = sum(c * q.t**p for p, c in jm_laurent_coefficients(q.m, q.cutoff, q.R).items())
    return poly * math.exp(-q.R**2 / (4.0 * q.t))


def _gaussian_factor_poly(j: int, t: float) -> np.ndarray:
    """Polynomial h_j with d^j/ds^j exp(-s^2/4t) = h_j(s) exp(-s^2/4t)."""
    coeffs = np.zeros(j + 1)
    for k, c in gaussian_derivative_coeffs(j):
        coeffs[j - 2 * k] += float(c) * t ** (k - j)
    return coeffs


def _affine_compose(coeffs: list[float], a: float, b: float) -> np.ndarray:
    """Coefficients of p(a*s + b) given coefficients of p(u), ascending."""
    out = np.zeros(1)
    lin = np.array([b, a])
    for c in reversed(coeffs):
        out = npoly.polyadd(npoly.polymul(out, lin), [c])
    return out


def _sign_change_points(coeffs: np.ndarray, lo: float, hi: float, samples: int = 4096) -> list[float]:
    """Sign-change locations of a polynomial on (lo, hi) via grid + Brent.

    Grid scanning is robust where companion-matrix root finding is not
    (the coefficient ranges here span many orders of magnitude).  A root
    pair closer than the grid step has no sign change and needs no cut:
    the integrand stays one-signed and smooth across it.
    """
    from scipy import optimize

    cs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if cs.size <= 1:
        return []
    xs = np.linspace(lo, hi, samples)
    vals = npoly.polyval(xs, cs)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    cuts = []
    for i in idx:
        root = optimize.brentq(
            lambda s: float(npoly.polyval(s, cs)), xs[i], xs[i + 1], xtol=1e-15, rtol=8.9e-16
        )
        cuts.append(float(root))
    return cuts


def _gaussian_moment(beta: int, a: float, b: float | None, t: float) -> float:
    """Closed form for the integral of s^beta * exp(-s^2/4t) over [a, b]."""
    half = (beta + 1) / 2.0
    val = upper_incomplete_gamma(half, a * a / (4.0 * t))
    if b is not None:
        val -= upper_incomplete_gamma(half, b * b / (4.0 * t))
    return 2.0**beta * t**half * val


def _smoothed_polys(q: JmQuery, sched: EpsilonSchedule) -> tuple[np.ndarray, np.ndarray]:
    """Polynomial factors of (1 - d^2/ds^2)^m (psi * Gaussian) on s > 0.

    Returns (Wu, Q): on the transition interval the integrand equals
    Wu(u) * exp(-s^2/4t) with u = (s - eps1)/(eps2 - eps1); beyond eps2
    (ramp flat at 1) it equals Q(s) * exp(-s^2/4t).  The transition factor
    is kept in the local ramp variable because composing the steep ramp
    into the global variable inflates coefficients by delta^-degree and
    destroys evaluation accuracy near the sign changes.
    """
    t = q.t
    delta = sched.eps2 - sched.eps1
    base = q.cutoff.base_polynomial
    if q.cutoff.smoothness_order < 2 * q.m:
        raise ValueError(
            f"ramp is C^{q.cutoff.smoothness_order} but order m={q.m} needs C^{2 * q.m}"
        )
    Wu = np.zeros(1)
    Q = np.zeros(1)
    for i in range(q.m + 1):
        sign_binom = math.comb(q.m, i) * (-1.0) ** i
        Q = npoly.polyadd(Q, sign_binom * _gaussian_factor_poly(2 * i, t))
        for j in range(2 * i + 1):
            # h_j re-expressed in u through s = eps1 + delta*u (benign:
            # composing with a contraction shrinks coefficients)
            hj_u = _affine_compose(list(_gaussian_factor_poly(j, t)), delta, sched.eps1)
            psi_q = base.derivative(2 * i - j).float_coeffs() or [0.0]
            term = npoly.polymul(np.asarray(psi_q) * delta ** (j - 2 * i), hj_u)
            Wu = npoly.polyadd(Wu, sign_binom * math.comb(2 * i, j) * term)
    return Wu, Q


def jm_numeric_oracle(q: JmQuery, sched: EpsilonSchedule) -> float:
    """L1 norm of the smoothed cut-off Gaussian for a concrete ramp placement.

    The even integrand vanishes identically on [0, eps1] (ramp is 0 there);
    on [eps1, eps2] it is |W(s)| exp(-s^2/4t), integrated adaptively on
    sign-resolved subintervals; on [eps2, inf) it is |Q(s)| exp(-s^2/4t),
    reduced to exact Gaussian moments between the (few) real roots of Q.
    The total is doubled by evenness.
    """
    sched.validate(q.R)
    t = q.t
    Wu, Q = _smoothed_polys(q, sched)
    eps1, eps2 = sched.eps1, sched.eps2
    delta = eps2 - eps1

    # transition piece: adaptive quadrature between sign changes of Wu
    cuts_u = [0.0] + _sign_change_points(Wu, 0.0, 1.0) + [1.0]
    scale = math.exp(-eps1 * eps1 / (4.0 * t))
    wmax = float(np.max(np.abs(npoly.polyval(np.linspace(0.0, 1.0, 64), Wu))))
    atol_piece = 1e-13 * scale * max(1.0, wmax) * delta

    def integrand(s):
        u = (s - eps1) / delta
        return np.abs(npoly.polyval(u, Wu)) * np.exp(-(s * s) / (4.0 * t))

    transition = 0.0
    for ua, ub in zip(cuts_u[:-1], cuts_u[1:]):
        if ub - ua <= 1e-300:
            continue
        val, _ = quadrature.integrate(
            integrand, eps1 + delta * ua, eps1 + delta * ub, atol=atol_piece
        )
        transition += val

    # flat piece: signed closed-form moments between roots of Q.  Roots of
    # the smoothed pure Gaussian cluster within a few sqrt(t) of the origin.
    q_hi = sched.eps2 + 16.0 * math.sqrt((2 * q.m + 1) * t)
    qcuts = [sched.eps2] + _sign_change_points(Q, sched.eps2, q_hi, samples=1024)
    tail = 0.0
    for idx, a in enumerate(qcuts):
        b = qcuts[idx + 1] if idx + 1 < len(qcuts) else None
        mid = 0.5 * (a + b) if b is not None else a + max(1.0, math.sqrt(t))
        sign = 1.0 if npoly.polyval(mid, Q) >= 0 else -1.0
        piece = sum(
            float(c) * _gaussian_moment(beta, a, b, t)
            for beta, c in enumerate(Q)
            if c != 0.0
        )
        tail += sign * piece
    # each signed piece is |integral| up to roundoff; clamp stray negatives
    tail = max(tail, 0.0)
    return 2.0 * (transition + tail)


def gaussian_tail_bound(beta: int, rho: float, t: float) -> tuple[float, float]:
    """Exact Gaussian tail moment and its elementary closed-form majorant.

    Valid for rho >= 2 sqrt(t); returns (lhs, rhs) with the contract
    lhs <= rhs.  The lhs is the integral of s^beta exp(-s^2/4t) over
    [rho, inf), evaluated through the incomplete gamma identity.
    """
    if beta < 0:
        raise ValueError(f"beta must be a non-negative integer, got {beta}")
    if not (t > 0.0):
        raise ValueError(f"t must be positive, got {t}")
    if rho < 2.0 * math.sqrt(t):
        raise ValueError(f"requires rho >= 2 sqrt(t), got rho={rho}, t={t}")
    lhs = _gaussian_moment(beta, rho, None, t)
    rhs = (
        2.0
        * math.e
        * math.factorial(math.ceil((beta - 1) / 2))
        * rho ** (beta - 1)
        * t
        * math.exp(-rho * rho / (4.0 * t))
    )
    return lhs, rhs
