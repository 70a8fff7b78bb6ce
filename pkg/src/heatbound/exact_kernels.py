"""Ground-truth heat kernels on exactly solvable domains.

Separable domains are products of lines, half-lines and intervals, each
coordinate carrying its own wall condition (absorbing, reflecting, or an
elastic Robin wall), so the kernel is a product of one-dimensional kernels
with certified truncation error.  These are the oracles every bound is
verified against, which is why each kernel admits two independent
evaluation routes (images vs eigenfunctions, closed form vs series).

The unit-disk and unit-ball center diagonals are evaluated from the radial
reflecting-wall spectrum; only radial modes contribute at the center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from .backend import series
from .special_functions import (
    bessel_j,
    bessel_j_prime_zeros,
    spherical_bessel_j_prime_zeros,
    upper_incomplete_gamma,
)

__all__ = [
    "BC",
    "FullLine",
    "HalfLine",
    "Interval",
    "SeparableDomain",
    "KernelSample",
    "halfline_kernel",
    "interval_kernel",
    "interval_kernel_images",
    "interval_kernel_eigen",
    "product_kernel",
    "product_kernel_batch",
    "disk_center_diag_neumann",
    "ball3_center_diag_neumann",
]

_IMAGE_CUTOFF = 148.0  # exp(-148/4) ~ 8e-17 relative to the central image
_EIGEN_CUTOFF = 41.5


@dataclass(frozen=True)
class BC:
    """Wall condition for one end of a factor: kind in {D, N, R}."""

    kind: str
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in ("D", "N", "R"):
            raise ValueError(f"kind must be D, N or R, got {self.kind!r}")
        if self.kind == "R" and self.sigma < 0.0:
            raise ValueError(f"Robin coefficient must be >= 0, got {self.sigma}")
        if self.kind != "R" and self.sigma != 0.0:
            raise ValueError("sigma only applies to Robin walls")

    @classmethod
    def dirichlet(cls) -> "BC":
        return cls("D")

    @classmethod
    def neumann(cls) -> "BC":
        return cls("N")

    @classmethod
    def robin(cls, sigma: float) -> "BC":
        return cls("R", float(sigma))

    @property
    def sign(self) -> float:
        """Image-method reflection sign; Robin walls have no pure sign."""
        if self.kind == "D":
            return -1.0
        if self.kind == "N":
            return 1.0
        raise ValueError("Robin walls are not handled by plain reflections")

    @property
    def effective_sigma(self) -> float:
        return self.sigma if self.kind == "R" else 0.0

    def is_pure(self) -> bool:
        return self.kind in ("D", "N") or (self.kind == "R" and self.sigma == 0.0)

    def pure_sign(self) -> float:
        """Sign treating Robin(0) as reflecting."""
        return 1.0 if (self.kind == "N" or (self.kind == "R" and self.sigma == 0.0)) else self.sign


@dataclass(frozen=True)
class FullLine:
    pass


@dataclass(frozen=True)
class HalfLine:
    bc: BC


@dataclass(frozen=True)
class Interval:
    length: float
    bc_left: BC
    bc_right: BC

    def __post_init__(self):
        if not (self.length > 0.0):
            raise ValueError(f"interval length must be positive, got {self.length}")


Factor = FullLine | HalfLine | Interval


@dataclass(frozen=True)
class SeparableDomain:
    """Product domain; dimension is the number of factors (>= 2)."""

    factors: tuple[Factor, ...]

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("need at least two factors")
        if all(isinstance(f, FullLine) for f in self.factors):
            raise ValueError("at least one factor must carry a boundary")

    @property
    def dimension(self) -> int:
        return len(self.factors)

    def boundary_distance(self, point) -> float:
        """Distance to the boundary; raises for non-interior points."""
        rho = math.inf
        for f, xi in zip(self.factors, point):
            if isinstance(f, FullLine):
                continue
            if isinstance(f, HalfLine):
                di = float(xi)
            else:
                di = min(float(xi), f.length - float(xi))
            if di <= 0.0:
                raise ValueError(f"point coordinate {xi} is not interior")
            rho = min(rho, di)
        return rho


@dataclass(frozen=True)
class KernelSample:
    """One kernel evaluation with certified truncation error and geometry."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    t: float
    value: float
    truncation_error: float
    rho_x: float
    rho_y: float


def _gauss(u: float, t: float) -> float:
    return math.exp(-u * u / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)


def halfline_kernel(bc: BC, x: float, y: float, t: float) -> float:
    """Heat kernel on (0, inf) with the given wall at 0."""
    if not (x > 0.0 and y > 0.0):
        raise ValueError("points must be interior (positive)")
    if not (t > 0.0):
        raise ValueError(f"t must be positive, got {t}")
    if bc.kind == "D":
        return _gauss(x - y, t) - _gauss(x + y, t)
    out = series.halfline_batch(
        1.0, bc.effective_sigma, np.array([x]), np.array([y]), np.array([t])
    )
    return float(out[0])


def _n_images(L: float, t: float) -> int:
    return 1 + math.ceil(math.sqrt(_IMAGE_CUTOFF * t) / (2.0 * L))


def _image_tail(L: float, t: float, nimg: int) -> float:
    """Bound on the dropped reflections |k| > nimg (both image families)."""
    u0 = 2.0 * nimg * L  # smallest dropped offset magnitude
    ratio = math.exp(-2.0 * nimg * L * L / t)
    lead = 4.0 * math.exp(-u0 * u0 / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    return lead / max(1.0 - ratio, 1e-2)


def _n_eigen(L: float, t: float) -> int:
    return 2 + math.ceil(L / math.pi * math.sqrt(_EIGEN_CUTOFF / t))


def _eigen_tail(L: float, t: float, nterms: int, amp_sq: float) -> float:
    w = nterms * math.pi / L
    ratio = math.exp(-(2.0 * nterms + 1.0) * (math.pi / L) ** 2 * t)
    return amp_sq * math.exp(-w * w * t) / max(1.0 - ratio, 1e-3)


def interval_kernel_images(L: float, bc_left: BC, bc_right: BC, x: float, y: float, t: float) -> tuple[float, float]:
    """Reflection-series kernel on (0, L); pure D/N walls only.

    Returns (value, truncation_bound).
    """
    s0, sL = bc_left.pure_sign(), bc_right.pure_sign()
    nimg = _n_images(L, t)
    val = series.interval_images_batch(
        s0, sL, np.array([x]), np.array([y]), np.array([t]), L, nimg
    )
    return float(val[0]), _image_tail(L, t, nimg)


def interval_kernel_eigen(L: float, bc_left: BC, bc_right: BC, x: float, y: float, t: float) -> tuple[float, float]:
    """Eigenfunction-series kernel on (0, L); any wall pair.

    Returns (value, truncation_bound).
    """
    if bc_left.is_pure() and bc_right.is_pure():
        nterms = _n_eigen(L, t)
        val = series.interval_eigen_batch(
            bc_left.pure_sign(), bc_right.pure_sign(),
            np.array([x]), np.array([y]), np.array([t]), L, nterms,
        )
        return float(val[0]), _eigen_tail(L, t, nterms, 2.0 / L)
    omegas, amp_c, amp_s = robin_interval_modes(
        L, bc_left, bc_right, omega_max=math.sqrt(_EIGEN_CUTOFF / t) + 2.0 * math.pi / L
    )
    val = series.general_eigen_batch(
        omegas, amp_c, amp_s, np.array([x]), np.array([y]), np.array([t])
    )
    amp_sq = float(np.max(amp_c**2 + amp_s**2)) if omegas.size else 2.0 / L
    # frequencies are asymptotically pi/L apart; pad by treating the worst
    # normalized amplitude as a uniform envelope past the cutoff
    w_last = float(omegas[-1])
    tail = 2.0 * amp_sq * math.exp(-w_last * w_last * t) / max(
        1.0 - math.exp(-2.0 * w_last * (math.pi / (2.0 * L)) * t), 1e-3
    )
    return float(val[0]), tail


def interval_kernel(
    L: float,
    bc_left: BC,
    bc_right: BC,
    x: float,
    y: float,
    t: float,
    check: bool = True,
) -> float:
    """Interval kernel; by default both representations are computed and
    must agree to 1e-10 (an internal consistency guard, not a user knob
    beyond opting out for speed)."""
    if not (0.0 < x < L and 0.0 < y < L):
        raise ValueError("points must be interior to (0, L)")
    if not (t > 0.0):
        raise ValueError(f"t must be positive, got {t}")
    pure = bc_left.is_pure() and bc_right.is_pure()
    if pure:
        val, _ = interval_kernel_images(L, bc_left, bc_right, x, y, t)
        if check:
            other, _ = interval_kernel_eigen(L, bc_left, bc_right, x, y, t)
            scale = max(abs(val), (4.0 * math.pi * t) ** -0.5, 1.0)
            if abs(val - other) > 1e-10 * scale:
                raise RuntimeError(
                    f"kernel representations disagree: images={val!r} eigen={other!r}"
                )
        return val
    val, _ = interval_kernel_eigen(L, bc_left, bc_right, x, y, t)
    return val


def _secular_modes(L: float, bc_left: BC, bc_right: BC, omega_max: float):
    """Frequencies and unnormalized (cos, sin) amplitudes of interval modes."""
    sig0 = bc_left.effective_sigma
    sigL = bc_right.effective_sigma

    def shape(w: float) -> tuple[float, float]:
        if bc_left.kind == "D":
            return 0.0, 1.0
        return 1.0, sig0 / w

    def residual(w: float) -> float:
        a, b = shape(w)
        phi = a * math.cos(w * L) + b * math.sin(w * L)
        dphi = -a * w * math.sin(w * L) + b * w * math.cos(w * L)
        if bc_right.kind == "D":
            return phi
        return dphi + sigL * phi

    step = math.pi / (8.0 * L)
    # prepend a near-zero probe: for weakly elastic walls the lowest
    # frequency sits at omega ~ sqrt(sigma/L), far below the grid step
    ws = np.concatenate([[1e-12 * step], np.arange(step * 0.5, omega_max, step)])
    vals = np.array([residual(w) for w in ws])
    roots = []
    for i in range(len(ws) - 1):
        if vals[i] == 0.0:
            roots.append(float(ws[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(float(optimize.brentq(residual, ws[i], ws[i + 1], xtol=1e-14)))
    return roots, shape


def robin_interval_modes(L: float, bc_left: BC, bc_right: BC, omega_max: float):
    """Normalized interval modes when at least one wall is Robin.

    Returns (omegas, amp_cos, amp_sin) arrays including a zero-frequency
    constant mode only in the doubly-reflecting degenerate case (which the
    closed D/N route already covers; kept for completeness).
    """
    roots, shape = _secular_modes(L, bc_left, bc_right, omega_max)
    omegas, amp_c, amp_s = [], [], []
    reflecting0 = bc_left.kind != "D" and bc_left.effective_sigma == 0.0
    reflectingL = bc_right.kind != "D" and bc_right.effective_sigma == 0.0
    if reflecting0 and reflectingL:
        omegas.append(0.0)
        amp_c.append(1.0 / math.sqrt(L))
        amp_s.append(0.0)
    for w in roots:
        a, b = shape(w)
        s2w = math.sin(2.0 * w * L)
        c_int = L / 2.0 + s2w / (4.0 * w)
        s_int = L / 2.0 - s2w / (4.0 * w)
        cs_int = math.sin(w * L) ** 2 / (2.0 * w)
        norm_sq = a * a * c_int + 2.0 * a * b * cs_int + b * b * s_int
        n = math.sqrt(norm_sq)
        omegas.append(w)
        amp_c.append(a / n)
        amp_s.append(b / n)
    return np.array(omegas), np.array(amp_c), np.array(amp_s)


def _factor_kernel(f: Factor, xi: float, yi: float, t: float) -> tuple[float, float]:
    """(value, truncation_bound) for one coordinate factor."""
    if isinstance(f, FullLine):
        return _gauss(xi - yi, t), 0.0
    if isinstance(f, HalfLine):
        return halfline_kernel(f.bc, xi, yi, t), 0.0
    if f.bc_left.is_pure() and f.bc_right.is_pure():
        return interval_kernel_images(f.length, f.bc_left, f.bc_right, xi, yi, t)
    return interval_kernel_eigen(f.length, f.bc_left, f.bc_right, xi, yi, t)


def product_kernel(dom: SeparableDomain, x, y, t: float) -> KernelSample:
    """Kernel on a separable domain as a product of per-coordinate kernels."""
    x = tuple(float(v) for v in x)
    y = tuple(float(v) for v in y)
    if len(x) != dom.dimension or len(y) != dom.dimension:
        raise ValueError("point dimension does not match the domain")
    if not (t > 0.0):
        raise ValueError(f"t must be positive, got {t}")
    rho_x = dom.boundary_distance(x)
    rho_y = dom.boundary_distance(y)
    vals, errs = [], []
    for f, xi, yi in zip(dom.factors, x, y):
        v, e = _factor_kernel(f, xi, yi, t)
        vals.append(v)
        errs.append(e)
    value = math.prod(vals)
    trunc = 0.0
    for i, e in enumerate(errs):
        trunc += e * math.prod(abs(vals[j]) + errs[j] for j in range(len(vals)) if j != i)
    return KernelSample(
        x=x, y=y, t=t, value=value, truncation_error=trunc, rho_x=rho_x, rho_y=rho_y
    )


def product_kernel_batch(dom: SeparableDomain, X, Y, T):
    """Vectorized product kernel over sample arrays.

    X, Y have shape (n, d), T shape (n,).  Returns
    (values, deviations, rho_x, rho_y) where deviations = K - K_0 is
    accumulated from the per-factor boundary parts

        D_n = D_{n-1} * k_n + F_{n-1} * dev_n,  F_n = F_{n-1} * free_n,

    which never subtracts two free-kernel-sized quantities: the result
    stays accurate even when the true difference is exponentially small.
    Truncation depths are sized by the largest time in the batch.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    T = np.asarray(T, dtype=float)
    n = X.shape[0]
    values = np.ones(n)
    devs = np.zeros(n)
    free = np.ones(n)
    rho_x = np.full(n, np.inf)
    rho_y = np.full(n, np.inf)
    tmax = float(np.max(T))
    for i, f in enumerate(dom.factors):
        xi, yi = np.ascontiguousarray(X[:, i]), np.ascontiguousarray(Y[:, i])
        free_i = np.exp(-((xi - yi) ** 2) / (4.0 * T)) / np.sqrt(4.0 * np.pi * T)
        if isinstance(f, FullLine):
            dev_i = np.zeros(n)
            k_i = free_i
        elif isinstance(f, HalfLine):
            sign = -1.0 if f.bc.kind == "D" else 1.0
            sigma = f.bc.effective_sigma
            dev_i = np.asarray(series.halfline_dev_batch(sign, sigma, xi, yi, T))
            k_i = free_i + dev_i
            rho_x = np.minimum(rho_x, xi)
            rho_y = np.minimum(rho_y, yi)
        else:
            if not (f.bc_left.is_pure() and f.bc_right.is_pure()):
                raise NotImplementedError("batch sweeps support pure walls on intervals")
            nimg = _n_images(f.length, tmax)
            dev_i = np.asarray(
                series.interval_images_dev_batch(
                    f.bc_left.pure_sign(), f.bc_right.pure_sign(), xi, yi, T, f.length, nimg
                )
            )
            k_i = free_i + dev_i
            rho_x = np.minimum(rho_x, np.minimum(xi, f.length - xi))
            rho_y = np.minimum(rho_y, np.minimum(yi, f.length - yi))
        devs = devs * k_i + free * dev_i
        free = free * free_i
        values = values * k_i
    return values, devs, rho_x, rho_y


def product_kernel_deviation(dom: SeparableDomain, x, y, t: float) -> float:
    """Scalar K - K_0 on a separable domain, cancellation-free."""
    X = np.asarray([x], dtype=float)
    Y = np.asarray([y], dtype=float)
    T = np.asarray([t], dtype=float)
    _, dev, _, _ = product_kernel_batch(dom, X, Y, T)
    return float(dev[0])


# --- ball-center diagonals -------------------------------------------------

@lru_cache(maxsize=None)
def _disk_radial_table(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Squared radial frequencies and mode weights 1/(pi J0(z)^2) at the
    disk center; the constant mode is handled separately."""
    zeros = np.array(bessel_j_prime_zeros(0, count))
    j0 = np.array([float(bessel_j(0, z)) for z in zeros])
    weights = 1.0 / (math.pi * j0**2)
    # tail bounds rely on 1/J0(z)^2 <= 2z, true with margin for every zero
    if not np.all(1.0 / j0**2 <= 2.0 * zeros):
        raise RuntimeError("radial mode weight bound violated")
    return zeros, weights


def _gaussian_moment_scaled(beta: int, a: float, t: float) -> float:
    """Integral of z^beta exp(-z^2 t) over [a, inf)."""
    return upper_incomplete_gamma((beta + 1) / 2.0, a * a * t) / (2.0 * t ** ((beta + 1) / 2.0))


def disk_center_diag_neumann(t: float, tol: float = 1e-12, max_zeros: int = 20000) -> tuple[float, float]:
    """Reflecting-wall unit-disk kernel at the center point, with error.

    value = 1/pi + (1/pi) sum_k exp(-z_k^2 t) / J0(z_k)^2 over the radial
    frequencies z_k (zeros of J0'); only radial modes are nonzero at the
    center.  The dropped tail is certified via 1/J0(z)^2 <= 2z and the
    >= pi spacing of the zeros.  Returns (value, tail_bound <= tol).
    """
    if not (t > 0.0):
        raise ValueError(f"t must be positive, got {t}")
    count = 64
    while True:
        zeros, weights = _disk_radial_table(count)
        z_next = zeros[-1] + math.pi  # lower bound for first dropped zero
        if z_next * z_next * t >= 1.0:  # envelope z e^(-z^2 t) decreasing
            tail = (2.0 / math.pi) * (
                z_next * math.exp(-z_next * z_next * t)
                + _gaussian_moment_scaled(1, z_next, t) / math.pi
            )
            if tail <= tol:
                break
        if count >= max_zeros:
            raise RuntimeError(
                f"cannot reach tol={tol} at t={t} within {max_zeros} radial modes"
            )
        count *= 2
    val = 1.0 / math.pi + float(series.weighted_series_sum(zeros**2, weights, t))
    return val, tail


@lru_cache(maxsize=None)
def _ball3_radial_table(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Radial frequencies for the unit ball (zeros of spherical j0').

    At a frequency a with j0'(a) = 0 one has 1/j0(a)^2 = 1 + a^2 exactly,
    so the center weight is (1 + a^2) / (2 pi).
    """
    zeros = np.array(spherical_bessel_j_prime_zeros(0, count))
    weights = (1.0 + zeros**2) / (2.0 * math.pi)
    return zeros, weights


def ball3_center_diag_neumann(t: float, tol: float = 1e-12, max_zeros: int = 20000) -> tuple[float, float]:
    """Reflecting-wall unit-ball (d=3) kernel at the center, with error."""
    if not (t > 0.0):
        raise ValueError(f"t must be positive, got {t}")
    count = 64
    while True:
        zeros, weights = _ball3_radial_table(count)
        z_next = zeros[-1] + math.pi
        if z_next * z_next * t >= 2.0:
            envelope = lambda a: (1.0 + a * a) * math.exp(-a * a * t)
            tail = (1.0 / (2.0 * math.pi)) * (
                envelope(z_next)
                + (
                    _gaussian_moment_scaled(0, z_next, t)
                    + _gaussian_moment_scaled(2, z_next, t)
                )
                / math.pi
            )
            if tail <= tol:
                break
        if count >= max_zeros:
            raise RuntimeError(
                f"cannot reach tol={tol} at t={t} within {max_zeros} radial modes"
            )
        count *= 2
    val = 3.0 / (4.0 * math.pi) + float(series.weighted_series_sum(zeros**2, weights, t))
    return val, tail
