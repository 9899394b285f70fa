"""Compiled scalar kernels for the feasibility-boundary functions.

Every flow is described by four numbers: ``A = c*J - b - L`` (clearing
slack), ``B = b + L``, its rate ``r`` and ``split`` (true when ``J*r > B``,
i.e. when the active-max-term boundary ``h2`` can bind).

The inverse kernels find roots of monotone functions.  They bracket the root
by doubling and then take Newton steps, falling back to bisection whenever a
step leaves the bracket.  Because ``g`` is concave and ``Gamma`` convex the
Newton iterates approach the root monotonically, so the fallback is rarely
taken.
"""
import numpy as np
from numba import njit

RTOL = 1e-12
MAX_ITER = 200
MAX_DOUBLINGS = 2000


@njit(cache=True)
def h1(A, B, q):
    return q * A / (B + q)


@njit(cache=True)
def h2(A, B, r, c, q):
    return (q * q * (c - r) + q * r * A) / (r * B + 2.0 * r * q)


@njit(cache=True)
def H(A, B, r, c, split, q):
    v1 = q * A / (B + q)
    if not split:
        return v1
    v2 = (q * q * (c - r) + q * r * A) / (r * B + 2.0 * r * q)
    return min(v1, v2)


@njit(cache=True)
def dH(A, B, r, c, split, q):
    """Slope of the piece of H that is active at ``q``."""
    d1 = A * B / ((B + q) * (B + q))
    if not split:
        return d1
    v1 = q * A / (B + q)
    den = r * B + 2.0 * r * q
    num = q * q * (c - r) + q * r * A
    if v1 <= num / den:
        return d1
    return ((2.0 * q * (c - r) + r * A) * den - 2.0 * r * num) / (den * den)


@njit(cache=True)
def g_inv(A, B, r, c, split, theta):
    """Solve ``H(x) + x = theta``; returns NaN if the iteration cap is hit."""
    if theta <= 0.0:
        return 0.0
    lo = 0.0
    hi = max(theta, 1.0)
    k = 0
    while H(A, B, r, c, split, hi) + hi < theta:
        lo = hi
        hi *= 2.0
        k += 1
        if k > MAX_DOUBLINGS:
            return np.nan
    x = hi
    for _ in range(MAX_ITER):
        fx = H(A, B, r, c, split, x) + x - theta
        if fx == 0.0:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= RTOL * hi:
            return 0.5 * (lo + hi)
        xn = x - fx / (dH(A, B, r, c, split, x) + 1.0)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 0.01 * RTOL * xn:
            return xn
        x = xn
    return np.nan


@njit(cache=True)
def gamma(A, B, r, c, split, theta):
    total = 0.0
    for i in range(A.shape[0]):
        total += g_inv(A[i], B[i], r[i], c, split[i], theta)
    return total


@njit(cache=True)
def _gamma_and_slope(A, B, r, c, split, theta):
    total = 0.0
    slope = 0.0
    for i in range(A.shape[0]):
        x = g_inv(A[i], B[i], r[i], c, split[i], theta)
        total += x
        slope += 1.0 / (dH(A[i], B[i], r[i], c, split[i], x) + 1.0)
    return total, slope


@njit(cache=True)
def gamma_inv(A, B, r, c, split, target):
    """Solve ``Gamma(x) = target``; returns NaN if the iteration cap is hit."""
    if target <= 0.0:
        return 0.0
    lo = 0.0
    hi = max(target, 1.0)
    k = 0
    while gamma(A, B, r, c, split, hi) < target:
        lo = hi
        hi *= 2.0
        k += 1
        if k > MAX_DOUBLINGS:
            return np.nan
    x = hi
    for _ in range(MAX_ITER):
        gx, slope = _gamma_and_slope(A, B, r, c, split, x)
        if gx != gx:
            return np.nan
        fx = gx - target
        if fx == 0.0:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= RTOL * hi:
            return 0.5 * (lo + hi)
        xn = x - fx / slope
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 0.01 * RTOL * xn:
            return xn
        x = xn
    return np.nan
