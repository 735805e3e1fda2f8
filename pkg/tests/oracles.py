"""Independent reference evaluations used to freeze expected values.

Nothing here imports hurstci.
"""

import mpmath as mp
import numpy as np


def rho_mp(H, r, dps=50):
    """Five-term closed form for rho_H(r) in extended precision."""
    with mp.workdps(dps):
        two_h = 2 * mp.mpf(H)
        f = lambda t: abs(mp.mpf(t)) ** two_h  # noqa: E731
        return 0.5 * (-f(r - 2) + 4 * f(r - 1) - 6 * f(r) + 4 * f(r + 1) - f(r + 2))


def rho_longdouble(H, r):
    """Five-term closed form vectorised in numpy long double."""
    two_h = np.longdouble(2) * np.longdouble(H)
    r = np.asarray(r, dtype=np.longdouble)
    f = lambda t: np.abs(t) ** two_h  # noqa: E731
    return (-f(r - 2) + 4 * f(r - 1) - 6 * f(r) + 4 * f(r + 1) - f(r + 2)) / 2


def abs_sum_mp(H, r_from, r_to, dps=30):
    """sum_{r=r_from}^{r_to} |rho_H(r)| in extended precision."""
    with mp.workdps(dps):
        return mp.fsum(abs(rho_mp(H, r, dps)) for r in range(r_from, r_to + 1))


def second_differences_loop(values):
    return [values[k + 2] - 2 * values[k + 1] + values[k] for k in range(len(values) - 2)]


def q2_double_loop(c, R, x):
    total = 0.0
    m = len(x)
    for k in range(m):
        for l in range(m):
            total += x[k] * x[l] * R[k][l]
    return 2.0 * c * c * total


def smallest_on_grid(ok, lo, hi, step):
    """First grid point lo + k*step in [lo, hi] where monotone ``ok`` holds."""
    grid = np.arange(lo, hi + step, step)
    hits = np.nonzero(ok(grid))[0]
    return float(grid[hits[0]])
