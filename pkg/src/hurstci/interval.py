"""Confidence intervals for the Hurst parameter from the statistic S_n.

With probability at least ``phi(a) = [1 - 2 exp(-a^2/(71 (a/sqrt(n) + 3)))]_+``
the quantity ``g_n(H) = H - log(4 - 4^H) / (2 log n)`` lies in

    I(n) = 1/2 - log S_n / (2 log n) + log(1 -/+ a / (c sqrt(n))) / (2 log n),

where ``c = 4 - 4^{H*}`` and ``H <= H*``. Since g_n is increasing with slope
at least 1, inverting it gives the interval J(n) for H itself.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .concentration import UNIFORM_CONSTANT
from .errors import BelowRangeError, DegeneratePathError, DomainError, InfeasibleError
from .quadvar import four_minus_four_pow

__all__ = [
    "ConfidenceResult",
    "PlanResult",
    "GInverse",
    "HInterval",
    "LEFT_BRACKET",
    "RIGHT_BRACKET",
    "g",
    "g_lower_limit",
    "g_inverse",
    "confidence_level",
    "interval_for_g",
    "interval_for_h",
    "interval_length_bound",
    "confidence_interval",
    "required_a_unbounded",
    "required_a_fixed_n",
    "plan_unbounded",
    "plan_fixed_n",
]

LEFT_BRACKET = 1e-15
RIGHT_BRACKET = 1.0 - 1e-12
PLAN_ATOL = 1e-6


def _check_n(n):
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2 (log n appears in denominators), got {n!r}")


def _check_hstar(H_star):
    if not 0.0 < H_star < 1.0:
        raise DomainError(f"H_star must lie in (0, 1), got {H_star!r}")


def _c(H_star):
    return four_minus_four_pow(H_star)


class GInverse(NamedTuple):
    x: float
    saturated: bool


class HInterval(NamedTuple):
    lower: float
    upper: float
    saturated_right: bool


@dataclass(frozen=True)
class ConfidenceResult:
    n: int
    a: float
    H_star: float
    s_n: float
    phi: float
    I_l: float
    I_r: float
    J_l: Optional[float]
    J_r: Optional[float]
    saturated_right: bool

    @property
    def empty(self):
        return self.J_l is None

    @property
    def exceeds_h_star(self):
        """J_r lies above H*, i.e. the interval reaches outside the model."""
        return self.J_r is not None and self.J_r > self.H_star

    def contains_h(self, H, tol=0.0):
        return not self.empty and self.J_l - tol <= H <= self.J_r + tol

    def contains_g(self, H, tol=0.0):
        return self.I_l - tol <= g(self.n, H) <= self.I_r + tol

    def as_dict(self):
        return {
            "n": self.n,
            "a": self.a,
            "H_star": self.H_star,
            "s_n": self.s_n,
            "phi": self.phi,
            "I_l": self.I_l,
            "I_r": self.I_r,
            "J_l": self.J_l,
            "J_r": self.J_r,
            "empty": self.empty,
            "saturated_right": self.saturated_right,
            "exceeds_h_star": self.exceeds_h_star,
        }


@dataclass(frozen=True)
class PlanResult:
    """Outcome of a planner. ``n == 0`` means n was fixed by the caller."""

    epsilon: float
    H_star: float
    a: float
    n: int
    length_bound: Optional[float]
    phi: float
    feasible: bool = True
    reason: str = ""

    def as_dict(self):
        return {
            "epsilon": self.epsilon,
            "H_star": self.H_star,
            "a": self.a,
            "n": self.n,
            "length_bound": self.length_bound,
            "phi": self.phi,
            "feasible": self.feasible,
            "reason": self.reason,
        }


def g(n, x):
    """``x - log(4 - 4^x) / (2 log n)``."""
    _check_n(n)
    if not 0.0 < x < 1.0:
        raise DomainError(f"g_n is defined on (0, 1), got x={x!r}")
    return x - math.log(four_minus_four_pow(x)) / (2.0 * math.log(n))


def g_lower_limit(n):
    """Infimum of g_n over (0, 1): ``-log 3 / (2 log n)``."""
    _check_n(n)
    return -math.log(3.0) / (2.0 * math.log(n))


def _bisect_increasing(f, y, lo, hi):
    """Root of increasing ``f(x) = y`` on [lo, hi] until the bracket stops shrinking."""
    while True:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            return lo, hi
        if f(mid) < y:
            lo = mid
        else:
            hi = mid


def g_inverse(n, y) -> GInverse:
    """Solve g_n(x) = y on [1e-15, 1 - 1e-12] by bisection.

    ``saturated`` is set when y lies beyond g_n at the right bracket; x is
    then the bracket itself.
    """
    lower = g_lower_limit(n)
    if not y > lower:
        raise BelowRangeError(f"y={y!r} is not above the range limit {lower!r} of g_n")
    if g(n, RIGHT_BRACKET) <= y:
        return GInverse(RIGHT_BRACKET, True)
    if g(n, LEFT_BRACKET) >= y:
        return GInverse(LEFT_BRACKET, False)
    lo, hi = _bisect_increasing(lambda t: g(n, t), y, LEFT_BRACKET, RIGHT_BRACKET)
    # slope >= 1, so the nearer end in y is also the nearer end in x
    x = lo if abs(g(n, lo) - y) <= abs(g(n, hi) - y) else hi
    return GInverse(x, False)


def confidence_level(n, a):
    """``[1 - 2 exp(-a^2 / (71 (a/sqrt(n) + 3)))]_+``."""
    _check_n(n)
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    return max(0.0, 1.0 - 2.0 * math.exp(-(a * a) / (UNIFORM_CONSTANT * (a / math.sqrt(n) + 3.0))))


def _check_interval_args(n, a, H_star):
    _check_n(n)
    _check_hstar(H_star)
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    cap = _c(H_star) * math.sqrt(n)
    if a >= cap:
        raise InfeasibleError(
            f"a={a!r} must be below (4 - 4^H*) sqrt(n) = {cap!r} for n={n}, H*={H_star}"
        )


def interval_for_g(n, a, H_star, s_n):
    """The interval (I_l, I_r) covering g_n(H) with probability >= phi(a)."""
    _check_interval_args(n, a, H_star)
    if not s_n > 0:
        raise DegeneratePathError(f"S_n must be positive, got {s_n!r}")
    two_log_n = 2.0 * math.log(n)
    centre = 0.5 - math.log(s_n) / two_log_n
    ratio = a / (_c(H_star) * math.sqrt(n))
    return centre + math.log1p(-ratio) / two_log_n, centre + math.log1p(ratio) / two_log_n


def interval_for_h(n, a, H_star, s_n) -> Optional[HInterval]:
    """Invert g_n over I(n); ``None`` when I(n) lies below the range of g_n."""
    I_l, I_r = interval_for_g(n, a, H_star, s_n)
    lower = g_lower_limit(n)
    if I_r <= lower:
        return None
    J_l = 0.0 if I_l <= lower else g_inverse(n, I_l).x
    right = g_inverse(n, I_r)
    return HInterval(J_l, right.x, right.saturated)


def interval_length_bound(n, a, H_star):
    """Width of I(n), which also bounds the width of J(n)."""
    _check_interval_args(n, a, H_star)
    ratio = a / (_c(H_star) * math.sqrt(n))
    return (math.log1p(ratio) - math.log1p(-ratio)) / (2.0 * math.log(n))


def confidence_interval(n, a, H_star, s_n) -> ConfidenceResult:
    I_l, I_r = interval_for_g(n, a, H_star, s_n)
    h = interval_for_h(n, a, H_star, s_n)
    return ConfidenceResult(
        n=int(n),
        a=float(a),
        H_star=float(H_star),
        s_n=float(s_n),
        phi=confidence_level(n, a),
        I_l=I_l,
        I_r=I_r,
        J_l=None if h is None else h.lower,
        J_r=None if h is None else h.upper,
        saturated_right=False if h is None else h.saturated_right,
    )


def _smallest_feasible(ok, lo, hi, atol=PLAN_ATOL):
    """Smallest x (rounded up to ``atol``) with monotone ``ok(x)`` true; ok(hi) must hold."""
    while not ok(hi):
        lo, hi = hi, 2.0 * hi
    while hi - lo > 0.5 * atol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    a = math.ceil(hi / atol) * atol
    return a if ok(a) else hi


def _check_eps(epsilon):
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")


def required_a_unbounded(epsilon):
    """Smallest a with ``exp(-a^2 / (71 (a + 3))) <= epsilon / 2``."""
    _check_eps(epsilon)
    target = math.log(2.0 / epsilon) * UNIFORM_CONSTANT
    return _smallest_feasible(lambda a: a * a >= target * (a + 3.0), 0.0, 1.0)


def required_a_fixed_n(epsilon, n):
    """Smallest a with ``exp(-a^2 / (71 (a/sqrt(n) + 3))) <= epsilon / 2``."""
    _check_eps(epsilon)
    _check_n(n)
    target = math.log(2.0 / epsilon) * UNIFORM_CONSTANT
    root_n = math.sqrt(n)
    return _smallest_feasible(lambda a: a * a >= target * (a / root_n + 3.0), 0.0, 1.0)


def _length(n, a, c):
    r = a / (c * math.sqrt(n))
    return (math.log1p(r) - math.log1p(-r)) / (2.0 * math.log(n))


def plan_unbounded(epsilon, H_star, L=None) -> PlanResult:
    """Pick a from the n-free condition, then the smallest admissible n.

    n must satisfy ``a < (4 - 4^{H*}) sqrt(n)`` and, when ``L`` is given,
    an interval-length bound of at most L.
    """
    _check_hstar(H_star)
    if L is not None and not L > 0:
        raise DomainError(f"L must be positive, got {L!r}")
    a = required_a_unbounded(epsilon)
    c = _c(H_star)
    n = max(2, math.floor((a / c) ** 2) - 1)
    while not a < c * math.sqrt(n):
        n += 1
    if L is not None and _length(n, a, c) > L:
        lo, hi = n, 2 * n
        while _length(hi, a, c) > L:
            lo, hi = hi, 2 * hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _length(mid, a, c) <= L:
                hi = mid
            else:
                lo = mid
        n = hi
    return PlanResult(
        epsilon=epsilon,
        H_star=H_star,
        a=a,
        n=n,
        length_bound=_length(n, a, c),
        phi=confidence_level(n, a),
    )


def plan_fixed_n(epsilon, H_star, n) -> PlanResult:
    """Smallest a meeting the error target at this n, if it is admissible."""
    _check_hstar(H_star)
    a = required_a_fixed_n(epsilon, n)
    cap = _c(H_star) * math.sqrt(n)
    if a >= cap:
        return PlanResult(
            epsilon=epsilon,
            H_star=H_star,
            a=a,
            n=0,
            length_bound=None,
            phi=confidence_level(n, a),
            feasible=False,
            reason=f"required a={a:.6f} is not below (4 - 4^H*) sqrt(n) = {cap:.6f}; n is too small",
        )
    return PlanResult(
        epsilon=epsilon,
        H_star=H_star,
        a=a,
        n=0,
        length_bound=interval_length_bound(n, a, H_star),
        phi=confidence_level(n, a),
    )
