"""Legendre polynomials, their largest zeros, and the leading Bessel zero.

Everything here is driven by the three-term recurrence

    (n+1) P_{n+1}(x) = (2n+1) x P_n(x) - n P_{n-1}(x),

which is numerically stable on [-1, 1].  The largest zero of P_n controls
the per-observer shrink factor of the optimal entangled encoding, so it is
computed to near machine precision with a bracketed, bisection-safeguarded
Newton iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

#: first positive zero of the Bessel function J0; verified against a
#: power-series root-find in the test suite, embedded here as a constant.
BESSEL_J0_FIRST_ZERO = 2.404825557695773


@dataclass(frozen=True)
class LegendreTable:
    """Values P_0(x) .. P_L(x) at a single abscissa."""

    degree: int
    x: float
    values: np.ndarray  # shape (degree + 1,)


def legendre_values(max_degree: int, x) -> np.ndarray:
    """Evaluate P_0 .. P_max_degree at ``x`` (scalar or ndarray).

    Returns an array of shape (max_degree + 1,) + shape(x).
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    x = np.asarray(x, dtype=float)
    out = np.empty((max_degree + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = x
    for n in range(1, max_degree):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


def legendre_all(max_degree: int, x: float) -> LegendreTable:
    """Recurrence table of P_0(x) .. P_L(x); requires |x| <= 1."""
    xf = float(x)
    if not abs(xf) <= 1.0:
        raise ValueError(f"abscissa must satisfy |x| <= 1, got {xf}")
    vals = legendre_values(max_degree, xf)
    return LegendreTable(degree=max_degree, x=xf, values=vals)


def legendre_series(coeffs, x):
    """Evaluate the Legendre series sum_L coeffs[L] * P_L(x).

    Accumulates along the recurrence with reused buffers, so no
    (degree x points) table is materialized.  ``x`` may be a scalar or
    ndarray.
    """
    c = np.asarray(coeffs, dtype=float)
    x = np.asarray(x, dtype=float)
    acc = np.full_like(x, c[0])
    if c.size > 1:
        p_prev = np.ones_like(x)
        p = x.astype(float, copy=True)
        acc += c[1] * p
        t1 = np.empty_like(x)
        t2 = np.empty_like(x)
        for n in range(1, c.size - 1):
            np.multiply(x, p, out=t1)
            t1 *= (2.0 * n + 1.0) / (n + 1.0)
            np.multiply(p_prev, n / (n + 1.0), out=t2)
            t1 -= t2
            p_prev, p, t1 = p, t1, p_prev
            np.multiply(p, c[n + 1], out=t2)
            acc += t2
    return acc if acc.ndim else float(acc)


def _pn_pair(n: int, x: float) -> tuple[float, float]:
    """(P_n(x), P_{n-1}(x)) for scalar x, n >= 1."""
    p_prev, p = 1.0, x
    for j in range(1, n):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return p, p_prev


@lru_cache(maxsize=None)
def legendre_largest_zero(n: int) -> float:
    """Largest root of P_n, to absolute accuracy better than 1e-13.

    Newton iteration started from the Bessel-zero asymptotic
    cos(xi_0 / (n + 1/2)), safeguarded by bisection inside a bracket that
    provably contains only the largest zero: with nu = n + 1/2 the first
    zero angle is below pi/nu and the second above 1.75 pi/nu, so
    [cos(3.8/nu), 1] straddles exactly one sign change.
    """
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    if n == 1:
        return 0.0
    nu = n + 0.5
    lo, hi = math.cos(3.8 / nu), 1.0  # P_n(lo) < 0 < P_n(hi)
    x = math.cos(BESSEL_J0_FIRST_ZERO / nu)
    for _ in range(100):
        p, p_prev = _pn_pair(n, x)
        if p == 0.0:
            return x
        if p < 0.0:
            lo = x
        else:
            hi = x
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        x_new = x - p / dp
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 5e-16:
            return x_new
        x = x_new
    raise RuntimeError(f"largest-zero iteration did not converge for n = {n}")


def bessel_j0_first_zero() -> float:
    """First zero of J0, xi_0 = 2.404825557695773 (embedded constant)."""
    return BESSEL_J0_FIRST_ZERO
