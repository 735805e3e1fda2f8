# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror :mod:`hurstci._kernels_py`."""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, fabs, expm1, log
from scipy.linalg.cython_blas cimport ddot

cnp.import_array()

BACKEND = "cython"


cdef enum:
    SERIES_MIN_LAG = 3
    SERIES_MAX_TERMS = 120


cdef double _rho_series(double two_h, double r) noexcept nogil:
    # sum_{l>=2} binom(2H, 2l) (4 - 4^l) r^{2H-2l}; every term has one sign
    cdef double b = two_h * (two_h - 1.0) / 2.0
    cdef double inv_r2 = 1.0 / (r * r)
    cdef double p4 = 4.0, rpow = 1.0, term, total = 0.0
    cdef int l
    for l in range(1, SERIES_MAX_TERMS):
        b *= (two_h - 2.0 * l) * (two_h - 2.0 * l - 1.0) / ((2.0 * l + 1.0) * (2.0 * l + 2.0))
        p4 *= 4.0
        rpow *= inv_r2
        term = b * (4.0 - p4) * rpow
        total += term
        if fabs(term) <= 1e-18 * fabs(total):
            break
    return pow(r, two_h) * total * inv_r2


cdef double _rho_one(double two_h, long r) noexcept nogil:
    if r < 0:
        r = -r
    if r >= SERIES_MIN_LAG:
        return _rho_series(two_h, <double>r)
    if r == 0:
        # 4 - 4^H, accurate as H -> 1
        return -4.0 * expm1((0.5 * two_h - 1.0) * log(4.0))
    return 0.5 * (
        -pow(fabs(<double>(r - 2)), two_h)
        + 4.0 * pow(fabs(<double>(r - 1)), two_h)
        - 6.0 * pow(<double>r, two_h)
        + 4.0 * pow(<double>(r + 1), two_h)
        - pow(<double>(r + 2), two_h)
    )


def rho_values(double hurst, cnp.int64_t[::1] lags):
    """rho_H evaluated at each integer lag."""
    cdef Py_ssize_t i, m = lags.shape[0]
    cdef double two_h = 2.0 * hurst
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            o[i] = _rho_one(two_h, lags[i])
    return out


def rho_abs_partial_sum(double hurst, long radius):
    """|rho(0)| + 2 * sum_{r=1}^{radius} |rho(r)|."""
    cdef double two_h = 2.0 * hurst
    cdef double total = 0.0
    cdef long r
    with nogil:
        for r in range(radius, 0, -1):
            total += fabs(_rho_one(two_h, r))
        total = fabs(_rho_one(two_h, 0)) + 2.0 * total
    return total


def second_differences(const double[::1] values):
    cdef Py_ssize_t k, n = values.shape[0] - 2
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] x = out
    with nogil:
        for k in range(n):
            x[k] = values[k + 2] - 2.0 * values[k + 1] + values[k]
    return out


def second_difference_energy(const double[::1] values):
    """Sum of squared second differences, fused in one pass."""
    cdef Py_ssize_t k, n = values.shape[0] - 2
    cdef double d, total = 0.0
    with nogil:
        for k in range(n):
            d = values[k + 2] - 2.0 * values[k + 1] + values[k]
            total += d * d
    return total


def lagged_quadratic(const double[::1] x, const double[::1] weights):
    """sum_{|k-l| <= W} x[k] x[l] weights[|k-l|], with W = len(weights) - 1."""
    cdef int n = <int>x.shape[0]
    cdef int w = <int>weights.shape[0] - 1
    cdef int d, m, one = 1
    cdef double total = 0.0
    cdef double *px
    if n == 0:
        return 0.0
    px = <double *>&x[0]
    if w > n - 1:
        w = n - 1
    with nogil:
        for d in range(1, w + 1):
            m = n - d
            total += weights[d] * ddot(&m, px, &one, px + d, &one)
        total *= 2.0
        total += weights[0] * ddot(&n, px, &one, px, &one)
    return total
