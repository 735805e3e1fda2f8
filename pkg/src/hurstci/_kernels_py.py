"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np

BACKEND = "python"


SERIES_MIN_LAG = 3
SERIES_MAX_TERMS = 120


def _rho_series(two_h, r):
    # sum_{l>=2} binom(2H, 2l) (4 - 4^l) r^{2H-2l}; every term has one sign
    b = two_h * (two_h - 1.0) / 2.0
    inv_r2 = 1.0 / (r * r)
    p4, rpow = 4.0, np.ones_like(r)
    total = np.zeros_like(r)
    for l in range(1, SERIES_MAX_TERMS):
        b *= (two_h - 2.0 * l) * (two_h - 2.0 * l - 1.0) / ((2.0 * l + 1.0) * (2.0 * l + 2.0))
        p4 *= 4.0
        rpow = rpow * inv_r2
        term = b * (4.0 - p4) * rpow
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return r**two_h * total * inv_r2


def rho_values(hurst, lags):
    """rho_H evaluated at each integer lag."""
    two_h = 2.0 * hurst
    r = np.abs(np.asarray(lags, dtype=np.int64)).astype(np.float64)
    out = np.empty_like(r)
    far = r >= SERIES_MIN_LAG
    near = ~far
    if near.any():
        rn = r[near]
        out[near] = 0.5 * (
            -np.abs(rn - 2) ** two_h
            + 4.0 * np.abs(rn - 1) ** two_h
            - 6.0 * rn**two_h
            + 4.0 * (rn + 1) ** two_h
            - (rn + 2) ** two_h
        )
    if far.any():
        out[far] = _rho_series(two_h, r[far])
    # 4 - 4^H, accurate as H -> 1
    out[r == 0] = -4.0 * np.expm1((hurst - 1.0) * np.log(4.0))
    return out


def rho_abs_partial_sum(hurst, radius):
    """|rho(0)| + 2 * sum_{r=1}^{radius} |rho(r)|."""
    vals = np.abs(rho_values(hurst, np.arange(radius + 1, dtype=np.int64)))
    # smallest terms first, as in the compiled loop
    return float(vals[0] + 2.0 * np.sum(vals[:0:-1]))


def second_differences(values):
    v = np.asarray(values, dtype=np.float64)
    return v[2:] - 2.0 * v[1:-1] + v[:-2]


def second_difference_energy(values):
    """Sum of squared second differences."""
    x = second_differences(values)
    return float(np.dot(x, x))


def lagged_quadratic(x, weights):
    """sum_{|k-l| <= W} x[k] x[l] weights[|k-l|], with W = len(weights) - 1."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    w = min(len(weights) - 1, n - 1)
    total = 0.0
    for d in range(1, w + 1):
        total += weights[d] * np.dot(x[:-d], x[d:])
    return float(weights[0] * np.dot(x, x) + 2.0 * total)
