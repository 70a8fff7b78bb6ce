"""Exact rational polynomial algebra and smooth cutoff construction.

Everything here runs over `fractions.Fraction`: the two-point interpolation
conditions that define the cutoff polynomials are solved exactly, and the
derivative sup-norms that feed the localization-cost formulas are certified
upper values (rounded up), so every downstream bound stays a true bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "Polynomial",
    "CutoffSpec",
    "hermite_polynomial",
    "gaussian_derivative_coeffs",
    "interpolating_cutoff",
    "sup_derivative_norm",
]

_SUP_GRANULARITY = Fraction(1, 10**12)


@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial with exact rational coefficients, ascending degree."""

    coefficients: tuple[Fraction, ...]

    @staticmethod
    def from_coeffs(coeffs) -> "Polynomial":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return Polynomial(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1 if self.coefficients else -1

    def __call__(self, s):
        """Evaluate by Horner's rule; exact when `s` is a Fraction/int."""
        acc = 0 if not isinstance(s, float) else 0.0
        for c in reversed(self.coefficients):
            acc = acc * s + (float(c) if isinstance(s, float) else c)
        return acc

    def derivative(self, order: int = 1) -> "Polynomial":
        cs = list(self.coefficients)
        for _ in range(order):
            cs = [Fraction(i) * c for i, c in enumerate(cs)][1:]
        return Polynomial.from_coeffs(cs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial.from_coeffs(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial.from_coeffs([c * a for a in self.coefficients])

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1 or 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return Polynomial.from_coeffs(out)

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coefficients]


@dataclass(frozen=True)
class CutoffSpec:
    """A polynomial ramp on [0, 1] plus its derivative sup-norms.

    `base_polynomial` rises from 0 to 1 with derivatives 1..smoothness_order
    vanishing at both endpoints; extended by 0 below 0 and 1 above 1 it is a
    C^smoothness_order ramp on the whole line.  `sup_norms[j]` is a certified
    upper value for max |d^j/ds^j| on [0, 1].
    """

    base_polynomial: Polynomial
    smoothness_order: int
    sup_norms: tuple[float, ...] = field(default=())

    def __post_init__(self):
        p = self.base_polynomial
        n = self.smoothness_order
        if p(Fraction(0)) != 0 or p(Fraction(1)) != 1:
            raise ValueError("cutoff base polynomial must map 0 -> 0 and 1 -> 1")
        for i in range(1, n + 1):
            di = p.derivative(i)
            if di(Fraction(0)) != 0 or di(Fraction(1)) != 0:
                raise ValueError(f"derivative {i} must vanish at both endpoints")
        if self.sup_norms and abs(self.sup_norms[0] - 1.0) > 1e-12:
            raise ValueError("M_0 must equal 1 for a monotone 0 -> 1 ramp")

    def ramp(self, u: float) -> float:
        """Evaluate the extended ramp at a real argument."""
        if u <= 0.0:
            return 0.0
        if u >= 1.0:
            return 1.0
        return self.base_polynomial(float(u))


def hermite_polynomial(n: int) -> Polynomial:
    """Physicists' Hermite polynomial H_n with exact integer coefficients."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n // 2 + 1):
        power = n - 2 * k
        c = Fraction((-1) ** k * math.factorial(n), math.factorial(k) * math.factorial(power))
        coeffs[power] += c * 2**power
    return Polynomial.from_coeffs(coeffs)


def gaussian_derivative_coeffs(n: int) -> list[tuple[int, Fraction]]:
    """Exact coefficients of the n-th derivative of exp(-s^2/(4t)).

    Returns pairs (k, c) with k = 0..floor(n/2) such that the derivative is
    sum_k c * t**(k-n) * s**(n-2k) * exp(-s^2/(4t)).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    out = []
    for k in range(n // 2 + 1):
        c = (
            Fraction(-1, 2) ** n
            * (-1) ** k
            * Fraction(math.factorial(n), math.factorial(k) * math.factorial(n - 2 * k))
        )
        out.append((k, c))
    return out


def _solve_rational(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination with exact rational arithmetic."""
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular interpolation system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


@lru_cache(maxsize=None)
def interpolating_cutoff(n: int) -> CutoffSpec:
    """The unique degree <= 2n+1 ramp with n vanishing derivatives per end.

    Conditions p(0)=0 and p^(i)(0)=0 for i=1..n force the first n+1
    coefficients to zero, so only coefficients of s^(n+1)..s^(2n+1) are
    unknown; the n+1 conditions at s=1 determine them.  Solved exactly.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    m = n + 1  # unknowns: a_{n+1} .. a_{2n+1}
    # row i: i-th derivative at s=1 (i=0 gives value 1, i=1..n give 0)
    mat = []
    rhs = [Fraction(1)] + [Fraction(0)] * n
    for i in range(m):
        row = []
        for j in range(m):
            p = n + 1 + j  # power of s
            if p - i < 0:
                row.append(Fraction(0))
            else:
                row.append(Fraction(math.factorial(p), math.factorial(p - i)))
        mat.append(row)
    sol = _solve_rational(mat, rhs)
    coeffs = [Fraction(0)] * (n + 1) + sol
    poly = Polynomial.from_coeffs(coeffs)
    norms = tuple(sup_derivative_norm(poly, j) for j in range(n + 1))
    return CutoffSpec(base_polynomial=poly, smoothness_order=n, sup_norms=norms)


def _sign_change_roots(q: Polynomial, tol: Fraction = Fraction(1, 10**14)) -> list[tuple[Fraction, bool]]:
    """Roots of q in [0, 1] isolated by rational sign changes + bisection.

    Returns (location, is_exact) pairs.  A dyadic subdivision fine relative
    to the degree catches every simple root; tangential (even-multiplicity)
    touch points do not flip the sign but also cannot be strict interior
    extrema of the antiderivative's absolute value beyond what endpoint
    sampling already sees, and the upper-safe padding in sup_derivative_norm
    covers the residual slack.
    """
    if q.degree <= 0:
        return []
    pieces = max(64, 16 * q.degree)
    xs = [Fraction(k, pieces) for k in range(pieces + 1)]
    vals = [q(x) for x in xs]
    roots: list[tuple[Fraction, bool]] = []
    for i in range(pieces):
        a, b, fa, fb = xs[i], xs[i + 1], vals[i], vals[i + 1]
        if fa == 0:
            roots.append((a, True))
            continue
        if fa * fb < 0:
            exact = False
            while b - a > tol:
                mid = (a + b) / 2
                fm = q(mid)
                if fm == 0:
                    a = b = mid
                    exact = True
                    break
                if fa * fm < 0:
                    b = mid
                else:
                    a, fa = mid, fm
            roots.append(((a + b) / 2, exact))
    if vals[-1] == 0:
        roots.append((Fraction(1), True))
    return roots


def _round_up(x: Fraction) -> float:
    """Smallest float at 1e-12 granularity that is >= x."""
    up = math.ceil(x / _SUP_GRANULARITY) * _SUP_GRANULARITY
    f = float(up)
    while Fraction(f) < up:
        f = math.nextafter(f, math.inf)
    return f


def sup_derivative_norm(p: Polynomial, j: int) -> float:
    """Certified upper value of max |p^(j)| over [0, 1].

    Candidate points are the endpoints and the sign-change roots of p^(j+1).
    Values at exactly-known points enter as-is; values at bisected brackets
    are padded by a Lipschitz bound times the bracket width.  The rational
    maximum is then rounded up at 1e-12 granularity, so the result dominates
    the true maximum.
    """
    if j < 0:
        raise ValueError(f"derivative order must be >= 0, got {j}")
    q = p.derivative(j)
    if q.degree < 0:
        return 0.0
    dq = q.derivative()
    # |q| within bisection tolerance of a critical point moves at most L*tol
    lipschitz = sum(abs(c) for c in dq.coefficients) if dq.coefficients else Fraction(0)
    pad = lipschitz * Fraction(1, 10**14)
    candidates = [(Fraction(0), True), (Fraction(1), True)] + _sign_change_roots(dq)
    best = max(abs(q(x)) + (0 if exact else pad) for x, exact in candidates)
    return _round_up(best)
