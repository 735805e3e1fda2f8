"""Exact sampling of fractional Brownian motion on the grid k/n, k = 0..n+1.

Increments are fractional Gaussian noise drawn by circulant embedding
(Davies-Harte) of size 2(n+1); a dense Cholesky factor is used when the
embedding is not numerically nonnegative-definite.

Random numbers come from numpy's Philox4x64 counter-based generator keyed by
the 64-bit seed. Each raw 64-bit word is mapped to the open unit interval
as ``((w >> 11) + 0.5) * 2**-53`` and then to a standard normal through the
inverse normal CDF, so the variate stream is a fixed function of the seed.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import toeplitz
from scipy.special import ndtri

from .errors import DomainError, SimulationError

__all__ = [
    "PathSample",
    "FgnCovariance",
    "fgn_covariance",
    "fgn_autocovariance",
    "standard_normals",
    "sample_fbm",
    "sample_fbm_batch",
]

EIGEN_CLIP_RTOL = 1e-8
_SEED_MASK = (1 << 64) - 1


def _check_hurst(hurst):
    if not 0.0 < hurst < 1.0:
        raise DomainError(f"Hurst parameter must lie in (0, 1), got {hurst!r}")


@dataclass(frozen=True)
class PathSample:
    """Values of a path on the grid: ``values[k] = B(k/n)`` for k = 0..n+1."""

    n: int
    values: np.ndarray
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.n < 2:
            raise DomainError(f"grid parameter n must be >= 2, got {self.n}")
        if values.shape != (self.n + 2,):
            raise DomainError(
                f"expected {self.n + 2} values for n={self.n}, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("path values must be finite")
        if values[0] != 0.0:
            raise DomainError(f"path must start at 0, got values[0]={values[0]!r}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def times(self):
        return np.arange(self.n + 2) / self.n

    def increments(self):
        return np.diff(self.values)


@dataclass(frozen=True)
class FgnCovariance:
    """Unit-lag fGn autocovariance ``gamma[r]`` for r = 0..len(gamma)-1."""

    H: float
    gamma: np.ndarray

    def __post_init__(self):
        _check_hurst(self.H)


def fgn_covariance(H, r):
    """Covariance of unit-lag fractional Gaussian noise at lag ``r``."""
    _check_hurst(H)
    r = np.abs(np.asarray(r, dtype=np.float64))
    two_h = 2.0 * H
    out = 0.5 * ((r + 1.0) ** two_h - 2.0 * r**two_h + np.abs(r - 1.0) ** two_h)
    return float(out) if out.ndim == 0 else out


def fgn_autocovariance(H, max_lag):
    return FgnCovariance(H, fgn_covariance(H, np.arange(max_lag + 1)))


def standard_normals(seed, size):
    """Deterministic standard normal variates for a 64-bit seed."""
    gen = np.random.Philox(int(seed) & _SEED_MASK)
    words = gen.random_raw(size)
    u = ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u)


@lru_cache(maxsize=16)
def _embedding_sqrt_eigenvalues(H, m):
    """sqrt of the circulant eigenvalues for m increments, or None if indefinite."""
    gamma = fgn_covariance(H, np.arange(m + 1))
    row = np.concatenate([gamma, gamma[m - 1 : 0 : -1]])
    lam = np.fft.rfft(row).real
    top = lam.max()
    if lam.min() < -EIGEN_CLIP_RTOL * top:
        return None
    out = np.sqrt(np.clip(lam, 0.0, None) * (2 * m))
    out.flags.writeable = False
    return out


@lru_cache(maxsize=4)
def _cholesky_factor(H, m):
    cov = toeplitz(fgn_covariance(H, np.arange(m)))
    try:
        factor = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise SimulationError(
            f"fGn covariance is not numerically positive definite (H={H}, m={m})"
        ) from exc
    factor.flags.writeable = False
    return factor


def _circulant_increments(scaled_sqrt_eig, normals):
    """Map 2m standard normals (last axis) to m fGn increments.

    Layout per row: normals[0] feeds the zero frequency, normals[1] the
    Nyquist frequency, normals[2:] the real/imaginary parts of the rest.
    """
    m = scaled_sqrt_eig.shape[0] - 1
    lead = normals.shape[:-1]
    spec = np.empty(lead + (m + 1,), dtype=np.complex128)
    spec[..., 0] = normals[..., 0]
    spec[..., m] = normals[..., 1]
    pairs = normals[..., 2:].reshape(lead + (m - 1, 2))
    spec[..., 1:m] = (pairs[..., 0] + 1j * pairs[..., 1]) * np.sqrt(0.5)
    spec *= scaled_sqrt_eig
    return np.fft.irfft(spec, n=2 * m, axis=-1)[..., :m]


def _fgn(H, m, normals, method):
    if method == "auto":
        method = "circulant" if _embedding_sqrt_eigenvalues(H, m) is not None else "cholesky"
    if method == "circulant":
        sqrt_eig = _embedding_sqrt_eigenvalues(H, m)
        if sqrt_eig is None:
            raise SimulationError(f"circulant embedding is indefinite (H={H}, m={m})")
        return _circulant_increments(sqrt_eig, normals)
    if method == "cholesky":
        return normals[..., :m] @ _cholesky_factor(H, m).T
    raise ValueError(f"unknown method {method!r}")


def _check_args(H, n):
    _check_hurst(H)
    if int(n) != n or n < 2:
        raise DomainError(f"grid parameter n must be an integer >= 2, got {n!r}")


def sample_fbm(H, n, seed, method="auto"):
    """Draw fBm at times k/n, k = 0..n+1.

    ``method`` is ``"auto"`` (circulant embedding with Cholesky fallback),
    ``"circulant"`` or ``"cholesky"``. The same seed gives the same
    underlying normals under every method.
    """
    _check_args(H, n)
    m = n + 1
    inc = _fgn(H, m, standard_normals(seed, 2 * m), method)
    values = np.empty(n + 2)
    values[0] = 0.0
    np.cumsum(inc * float(n) ** -H, out=values[1:])
    return PathSample(n, values)


def sample_fbm_batch(H, n, seeds, method="auto"):
    """Paths for several seeds as an array of shape (len(seeds), n+2).

    Row i equals ``sample_fbm(H, n, seeds[i]).values``.
    """
    _check_args(H, n)
    m = n + 1
    normals = np.stack([standard_normals(s, 2 * m) for s in seeds])
    inc = _fgn(H, m, normals, method) * float(n) ** -H
    out = np.zeros((len(normals), n + 2))
    np.cumsum(inc, axis=1, out=out[:, 1:])
    return out
