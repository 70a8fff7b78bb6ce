"""Universal dimension-dependent constants and the diagonal growth bounds.

The six constants feed every composite heat-kernel estimate.  The third one
is only known through an explicit upper bound; we use that bound as the
value, which keeps every downstream inequality valid (all appearances are
monotone increasing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .special_functions import beta, gamma, unit_ball_volume

__all__ = [
    "DimensionParams",
    "ConstantSet",
    "default_smoothing_order",
    "compute_constants",
    "spectral_diag_bound",
    "green_diag_bound",
    "free_green_diag",
]


def default_smoothing_order(d: int) -> int:
    """Smallest smoothing order used by the headline bound: ceil((d+1)/2)."""
    return -(-(d + 1) // 2)


@dataclass(frozen=True)
class DimensionParams:
    """Dimension d >= 2 and smoothing order m > d/2."""

    d: int
    m: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if 2 * self.m <= self.d:
            raise ValueError(f"need m > d/2, got m={self.m}, d={self.d}")

    @classmethod
    def with_default_m(cls, d: int) -> "DimensionParams":
        return cls(d=d, m=default_smoothing_order(d))

    @property
    def m_d(self) -> int:
        return default_smoothing_order(self.d)


@dataclass(frozen=True)
class ConstantSet:
    """The six universal constants, all strictly positive."""

    d: int
    m: int
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float

    def as_dict(self) -> dict[str, float]:
        return {f"c{i}": getattr(self, f"c{i}") for i in range(1, 7)}


@lru_cache(maxsize=None)
def compute_constants(p: DimensionParams) -> ConstantSet:
    """Assemble the constant set for (d, m).

    c1 is the phase-space volume factor; c3 uses the published upper bound
    2*m_d*3^(1/(2 m_d)); c2, c4, c5 follow by the convexity/Young splitting
    of the spectral bound; c6 adds the free Green diagonal to the smoothed
    spectral mass m*c4*B(1+d/2, m-d/2).
    """
    d, m = p.d, p.m
    md = p.m_d
    c1 = unit_ball_volume(d) * (2.0 * math.pi) ** (-d)
    c3 = 2.0 * md * 3.0 ** (1.0 / (2.0 * md))
    c2 = d * c1 * (2.0 / math.pi * c3**2 + c3)
    c4 = c1 + (d - 1) / d * 2.0 ** (d - 2) * c2
    c5 = 2.0 ** (d - 2) * c2 * (c3 ** (d - 1) + 1.0 / d)
    c6 = m * c4 * beta(1.0 + d / 2.0, m - d / 2.0) + free_green_diag(p)
    return ConstantSet(d=d, m=m, c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, c6=c6)


def spectral_diag_bound(p: DimensionParams, rho: float, lam: float) -> tuple[float, float]:
    """Diagonal spectral-function bounds at boundary distance rho, level lam.

    Returns (sharp, simplified); the sharp form is
    c1*lam^(d/2) + (c2/rho)*(lam^(1/2) + c3/rho)^(d-1) and the simplified
    form c4*lam^(d/2) + c5*rho^-d dominates it pointwise.
    """
    if not (rho > 0.0):
        raise ValueError(f"rho must be positive, got {rho}")
    if not (lam > 0.0):
        raise ValueError(f"lambda must be positive, got {lam}")
    c = compute_constants(p)
    sharp = c.c1 * lam ** (p.d / 2.0) + c.c2 / rho * (math.sqrt(lam) + c.c3 / rho) ** (p.d - 1)
    simplified = c.c4 * lam ** (p.d / 2.0) + c.c5 * rho ** (-p.d)
    return sharp, simplified


def green_diag_bound(p: DimensionParams, rho: float) -> float:
    """Upper bound for the order-m Green diagonal at boundary distance rho."""
    if not (rho > 0.0):
        raise ValueError(f"rho must be positive, got {rho}")
    c = compute_constants(p)
    return p.m * c.c4 * beta(1.0 + p.d / 2.0, p.m - p.d / 2.0) + c.c5 * rho ** (-p.d)


def free_green_diag(p: DimensionParams) -> float:
    """Exact order-m Green diagonal of the whole-space Laplacian."""
    return gamma(p.m - p.d / 2.0) / ((4.0 * math.pi) ** (p.d / 2.0) * math.factorial(p.m - 1))
