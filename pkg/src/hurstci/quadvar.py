"""Second-order quadratic variation of a path and the second-difference
autocovariance rho_H.

For r >= 3 every ``rho_H(r)`` has the sign of ``1 - 2H`` (all terms of its
binomial expansion share that sign), so the tail ``sum_{r>R} |rho_H(r)|``
equals ``|sum_{r>R} rho_H(r)|``. Because rho_H is a fourth difference of
``|r|^{2H}``, that sum telescopes to a third difference at the cut-off, which
is what :func:`rho_tail_sum` evaluates.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .fbm_sim import PathSample

__all__ = [
    "SecondDifferenceSeries",
    "AutocovarianceTable",
    "PER_TERM_CONSTANT",
    "ABS_SUM_BOUND",
    "second_differences",
    "s_n",
    "z_n",
    "normalized_s_n",
    "four_minus_four_pow",
    "rho",
    "rho_tail_sum",
    "certified_tail_bound",
    "autocovariance_table",
    "rho_abs_sum",
    "rho_tail_coefficient_check",
    "per_term_violations",
]

# |rho_H(r)| <= PER_TERM_CONSTANT * r^{2H-4} for r >= 3
PER_TERM_CONSTANT = 243.0 / 20.0
# sup_H sum_r |rho_H(r)|
ABS_SUM_BOUND = 17.75
# beyond this radius rho_abs_sum relies on the telescoped tail
MAX_DIRECT_RADIUS = 4096


def four_minus_four_pow(x):
    """``4 - 4^x`` without cancellation near x = 1."""
    return -4.0 * math.expm1((x - 1.0) * math.log(4.0))


def _check_hurst(H):
    if not 0.0 < H < 1.0:
        raise DomainError(f"Hurst parameter must lie in (0, 1), got {H!r}")


@dataclass(frozen=True)
class SecondDifferenceSeries:
    """``x[k] = B((k+2)/n) - 2 B((k+1)/n) + B(k/n)`` for k = 0..n-1."""

    n: int
    x: np.ndarray

    def __post_init__(self):
        if self.x.shape != (self.n,):
            raise DomainError(f"expected {self.n} second differences, got {self.x.shape}")
        if not np.all(np.isfinite(self.x)):
            raise DomainError("second differences must be finite")

    @property
    def s_n(self):
        return float(np.dot(self.x, self.x))


@dataclass(frozen=True)
class AutocovarianceTable:
    H: float
    R_max: int
    values: np.ndarray
    tail_bound: float
    tail_sum: float

    @property
    def abs_sum(self):
        """sum over all integer lags of |rho_H(r)|."""
        v = np.abs(self.values)
        return float(v[0] + 2.0 * v[1:].sum() + self.tail_sum)


def second_differences(path: PathSample) -> SecondDifferenceSeries:
    return SecondDifferenceSeries(path.n, kernels.second_differences(path.values))


def s_n(path: PathSample) -> float:
    """The statistic S_n: sum of squared second differences."""
    return float(kernels.second_difference_energy(path.values))


def z_n(path: PathSample, H: float) -> float:
    """Centred statistic n^{2H-1/2} S_n - sqrt(n) (4 - 4^H) (needs the true H)."""
    _check_hurst(H)
    n = path.n
    return n ** (2.0 * H - 0.5) * s_n(path) - math.sqrt(n) * four_minus_four_pow(H)


def normalized_s_n(path: PathSample, H: float) -> float:
    """n^{2H-1} S_n, which converges a.s. to 4 - 4^H."""
    _check_hurst(H)
    return path.n ** (2.0 * H - 1.0) * s_n(path)


def rho(H, r):
    """Autocovariance of unit-scaled second differences at integer lag(s) ``r``.

    Lags 0, 1, 2 use the five-term closed form. For |r| >= 3 the closed form
    cancels (relative error grows like r^3 and blows up near H = 1/2), so
    the binomial expansion in ``1/r^2`` is summed instead; its terms share
    one sign, which keeps full relative precision.
    """
    _check_hurst(H)
    lags = np.ascontiguousarray(np.ravel(r), dtype=np.int64)
    out = kernels.rho_values(float(H), lags)
    return float(out[0]) if np.ndim(r) == 0 else out.reshape(np.shape(r))


def rho_tail_sum(H, R):
    """Exact ``sum_{|r| > R} |rho_H(r)|`` for R >= 2 (both signs of r)."""
    _check_hurst(H)
    if R < 2:
        raise DomainError(f"tail radius must be >= 2, got {R}")
    two_h = 2.0 * H
    R = float(R)
    e = lambda k: math.expm1(two_h * math.log1p(k / R))  # noqa: E731
    third_diff = R**two_h * (e(2.0) - 3.0 * e(1.0) - e(-1.0))
    # factor 1/2 from rho, factor 2 from the two signs of r
    return abs(third_diff)


def certified_tail_bound(H, R):
    """Upper bound on ``sum_{|r| > R} |rho_H(r)|`` from the per-term bound.

    Integrates ``(243/20) r^{2H-4}`` from R; never exceeds ``(243/10)/R``.
    """
    _check_hurst(H)
    return 2.0 * PER_TERM_CONSTANT * R ** (2.0 * H - 3.0) / (3.0 - 2.0 * H)


def autocovariance_table(H, R_max):
    if R_max < 3:
        raise DomainError(f"R_max must be >= 3, got {R_max}")
    values = rho(H, np.arange(R_max + 1))
    return AutocovarianceTable(
        H=H,
        R_max=int(R_max),
        values=values,
        tail_bound=certified_tail_bound(H, R_max),
        tail_sum=rho_tail_sum(H, R_max),
    )


def _radius_for(tol):
    return int(min(math.ceil(2.0 * PER_TERM_CONSTANT / tol), MAX_DIRECT_RADIUS))


def rho_abs_sum(H, tol=1e-8, radius=None):
    """``sum_{r in Z} |rho_H(r)|`` to within ``tol``.

    Lags up to the radius are summed directly; the remainder is the
    telescoped tail, exact up to rounding.
    """
    _check_hurst(H)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    R = _radius_for(tol) if radius is None else int(radius)
    if R < 2:
        raise DomainError(f"radius must be >= 2, got {R}")
    return kernels.rho_abs_partial_sum(float(H), R) + rho_tail_sum(H, R)


def rho_tail_coefficient_check(H, r):
    """Whether ``|rho_H(r)| <= (243/20) r^{2H-4}``; defined for r >= 3."""
    _check_hurst(H)
    if r < 3:
        raise DomainError(f"the per-term bound is only stated for r >= 3, got {r}")
    return bool(abs(rho(H, r)) <= PER_TERM_CONSTANT * float(r) ** (2.0 * H - 4.0))


def per_term_violations(H, r_max):
    """Count of lags 3 <= r <= r_max where the per-term bound fails."""
    _check_hurst(H)
    r = np.arange(3, r_max + 1)
    lhs = np.abs(rho(H, r))
    rhs = PER_TERM_CONSTANT * r.astype(np.float64) ** (2.0 * H - 4.0)
    return int(np.count_nonzero(lhs > rhs))
