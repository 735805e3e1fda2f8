"""Gaussian quadratic forms and their exponential tail bounds.

For a centred Gaussian vector X with covariance R and a coefficient c,

    Q1 = c * sum_k (X_k^2 - R(k,k)),    Q2 = 2 c^2 * sum_{k,l} X_k X_l R(k,l).

If Q2 <= alpha * Q1 + beta almost surely, then for z > 0

    P(Q1 >= z)  <= exp(-z^2 / (2 alpha z + 2 beta)),
    P(Q1 <= -z) <= exp(-z^2 / (2 beta)).

For second differences of fBm the domination holds with
alpha_n = (2/sqrt(n)) S and beta = 6 S, S = sum_r |rho_H(r)| <= 17.75,
which gives the H-free bound 2 exp(-a^2 / (71 (a/sqrt(n) + 3))).
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import toeplitz

from . import kernels
from .errors import DomainError
from .fbm_sim import PathSample
from .quadvar import ABS_SUM_BOUND, four_minus_four_pow, rho, rho_abs_sum, rho_tail_sum, second_differences

__all__ = [
    "GaussianQuadraticSpec",
    "TailParams",
    "TailProbabilities",
    "ChaosDiagnostics",
    "UNIFORM_CONSTANT",
    "MAJ_SLACK_TOL",
    "q1",
    "q2",
    "tail_bound",
    "hurst_alpha_beta",
    "uniform_z_tail_bound",
    "hurst_spec",
    "hurst_q2",
    "chaos_diagnostics",
]

UNIFORM_CONSTANT = 4.0 * ABS_SUM_BOUND  # = 71
MAJ_SLACK_TOL = 1e-9
DEFAULT_MAX_LAG = 1024


@dataclass(frozen=True)
class GaussianQuadraticSpec:
    """Coefficient ``c``, covariance matrix ``R`` and a realisation ``x``."""

    c: float
    R: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=np.float64)
        x = np.asarray(self.x, dtype=np.float64)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise DomainError(f"R must be a square matrix, got shape {R.shape}")
        if x.shape != (R.shape[0],):
            raise DomainError(f"x has shape {x.shape} but R is {R.shape[0]}x{R.shape[1]}")
        if not np.allclose(R, R.T, rtol=1e-12, atol=0.0):
            raise DomainError("R must be symmetric")
        if np.any(np.diag(R) < 0):
            raise DomainError("R must have a nonnegative diagonal")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class TailParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha >= 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha!r}")
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta!r}")


class TailProbabilities(NamedTuple):
    p_plus: float
    p_minus: float
    p_two_sided: float


@dataclass(frozen=True)
class ChaosDiagnostics:
    """Q1 = Z_n, Q2 and the slack of ``Q2 <= alpha_n Z_n + beta`` on one path.

    ``q2_value`` may come from a truncated lag window; ``q2_error`` bounds
    the neglected part and is already subtracted from ``slack``.
    """

    H: float
    n: int
    z_value: float
    q2_value: float
    q2_error: float
    alpha_n: float
    beta: float
    slack: float

    @property
    def holds(self):
        return self.slack >= -MAJ_SLACK_TOL


def q1(spec: GaussianQuadraticSpec) -> float:
    return float(spec.c * np.sum(spec.x**2 - np.diag(spec.R)))


def q2(spec: GaussianQuadraticSpec) -> float:
    return float(2.0 * spec.c**2 * (spec.x @ spec.R @ spec.x))


def tail_bound(params: TailParams, z: float) -> TailProbabilities:
    if not z > 0:
        raise DomainError(f"z must be positive, got {z!r}")
    p_plus = math.exp(-(z * z) / (2.0 * params.alpha * z + 2.0 * params.beta))
    p_minus = math.exp(-(z * z) / (2.0 * params.beta))
    return TailProbabilities(p_plus, p_minus, min(1.0, 2.0 * p_plus))


def hurst_alpha_beta(H, n, tol=1e-8) -> TailParams:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    total = rho_abs_sum(H, tol)
    return TailParams(alpha=2.0 * total / math.sqrt(n), beta=6.0 * total)


def uniform_z_tail_bound(n, a):
    """``min(1, 2 exp(-a^2 / (71 (a/sqrt(n) + 3))))``; valid for every H."""
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return min(1.0, 2.0 * math.exp(-(a * a) / (UNIFORM_CONSTANT * (a / math.sqrt(n) + 3.0))))


def hurst_spec(path: PathSample, H) -> GaussianQuadraticSpec:
    """Dense spec for the second differences of ``path``: O(n^2) memory."""
    n = path.n
    R = toeplitz(rho(H, np.arange(n))) / float(n) ** (2.0 * H)
    return GaussianQuadraticSpec(n ** (2.0 * H - 0.5), R, second_differences(path).x)


def hurst_q2(x, H, n, max_lag=DEFAULT_MAX_LAG):
    """Q2 for the second-difference family via its Toeplitz structure.

    Returns ``(value, error_bound)``. Lags beyond ``max_lag`` are dropped;
    their total contribution is at most ``2 n^{2H-1} S_n sum_{|r|>max_lag} |rho_H(r)|``.
    """
    if max_lag < 2:
        raise DomainError(f"max_lag must be >= 2, got {max_lag}")
    x = np.ascontiguousarray(x, dtype=np.float64)
    w = min(int(max_lag), n - 1)
    weights = np.ascontiguousarray(rho(H, np.arange(w + 1)))
    scale = 2.0 * float(n) ** (2.0 * H - 1.0)
    value = scale * kernels.lagged_quadratic(x, weights)
    if w >= n - 1:
        return value, 0.0
    return value, scale * float(np.dot(x, x)) * rho_tail_sum(H, w)


def chaos_diagnostics(path: PathSample, H, tol=1e-8, max_lag=DEFAULT_MAX_LAG) -> ChaosDiagnostics:
    n = path.n
    x = second_differences(path).x
    sn = float(np.dot(x, x))
    z = n ** (2.0 * H - 0.5) * sn - math.sqrt(n) * four_minus_four_pow(H)
    params = hurst_alpha_beta(H, n, tol)
    q2_value, q2_error = hurst_q2(x, H, n, max_lag)
    slack = params.alpha * z + params.beta - q2_value - q2_error
    return ChaosDiagnostics(H, n, z, q2_value, q2_error, params.alpha, params.beta, slack)
