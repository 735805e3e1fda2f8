"""Path files, Monte Carlo coverage studies and the constants sweep."""

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import quadvar
from .quadvar import four_minus_four_pow
from .concentration import DEFAULT_MAX_LAG, chaos_diagnostics
from .errors import DomainError, InfeasibleError, PathFormatError
from .fbm_sim import PathSample, sample_fbm
from .interval import confidence_interval, confidence_level, plan_fixed_n

__all__ = [
    "GRID_TOL",
    "EVENT_TOL",
    "load_path_csv",
    "dump_path_csv",
    "CoverageConfig",
    "CoverageReport",
    "TrialOutcome",
    "run_trial",
    "run_coverage",
    "verify_constants",
]

GRID_TOL = 1e-9
ORIGIN_TOL = 1e-12
EVENT_TOL = 1e-9
FLOAT_FMT = ".17g"


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_path_csv(source) -> PathSample:
    """Read a path from CSV: rows ``t,value`` or a single ``value`` column.

    ``source`` may be a file name, a binary stream or a text stream. A
    first row that is not numeric is treated as a header.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "rb") as fh:
            raw = fh.read()
    else:
        raw = source.read()
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise PathFormatError(f"input is not valid UTF-8: {exc}") from exc

    rows = [
        (lineno, [c.strip() for c in row])
        for lineno, row in enumerate(csv.reader(io.StringIO(raw)), start=1)
        if row and any(c.strip() for c in row)
    ]
    if rows and not all(_is_number(c) for c in rows[0][1]):
        rows = rows[1:]
    if len(rows) < 4:
        raise PathFormatError(
            f"need at least 4 data rows (n >= 2), got {len(rows)}", kind="too_short"
        )
    width = len(rows[0][1])
    if width not in (1, 2):
        raise PathFormatError(
            f"expected 1 or 2 columns, got {width}", kind="parse", row=rows[0][0]
        )

    table = np.empty((len(rows), width))
    for i, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise PathFormatError(
                f"row {lineno}: expected {width} columns, got {len(cells)}",
                kind="parse",
                row=lineno,
            )
        for j, cell in enumerate(cells):
            try:
                table[i, j] = float(cell)
            except ValueError:
                raise PathFormatError(
                    f"row {lineno}: non-numeric cell {cell!r}", kind="parse", row=lineno
                ) from None
    if not np.all(np.isfinite(table)):
        bad = rows[int(np.argwhere(~np.isfinite(table))[0, 0])][0]
        raise PathFormatError(f"row {bad}: non-finite value", kind="parse", row=bad)

    n = len(rows) - 2
    if width == 2:
        t = table[:, 0]
        if np.any(np.diff(t) <= 0):
            k = int(np.argmax(np.diff(t) <= 0)) + 1
            raise PathFormatError(
                f"row {rows[k][0]}: times are not strictly increasing",
                kind="grid",
                row=rows[k][0],
            )
        err = np.abs(t - np.arange(n + 2) / n)
        if err.max() > GRID_TOL:
            k = int(np.argmax(err))
            raise PathFormatError(
                f"row {rows[k][0]}: t={t[k]!r} is off the grid k/n = {k}/{n}",
                kind="grid",
                row=rows[k][0],
            )
    values = table[:, -1].copy()
    notes = ()
    if abs(values[0]) > ORIGIN_TOL:
        notes = (f"values shifted by {-values[0]!r} so that B(0) = 0",)
    values -= values[0]
    return PathSample(n, values, notes)


def dump_path_csv(path: PathSample, stream=None):
    """Write ``t,value`` rows at 17 significant digits; returns the text if no stream."""
    lines = ["t,value"]
    lines += [
        f"{k / path.n:{FLOAT_FMT}},{v:{FLOAT_FMT}}" for k, v in enumerate(path.values.tolist())
    ]
    text = "\n".join(lines) + "\n"
    if stream is None:
        return text
    stream.write(text)
    return None


@dataclass(frozen=True)
class CoverageConfig:
    H_true: float
    H_star: float
    n: int
    trials: int
    seed: int
    a: float = None
    epsilon: float = None
    max_lag: int = DEFAULT_MAX_LAG

    def __post_init__(self):
        if not 0.0 < self.H_true < 1.0:
            raise DomainError(f"H_true must lie in (0, 1), got {self.H_true!r}")
        if not self.H_true <= self.H_star < 1.0:
            raise DomainError(f"H_star must lie in [H_true, 1), got {self.H_star!r}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials!r}")
        if (self.a is None) == (self.epsilon is None):
            raise DomainError("exactly one of a and epsilon must be given")
        if self.a is None:
            plan = plan_fixed_n(self.epsilon, self.H_star, self.n)
            if not plan.feasible:
                raise InfeasibleError(plan.reason)
            object.__setattr__(self, "a", plan.a)
        if not self.a > 0:
            raise DomainError(f"a must be positive, got {self.a!r}")
        cap = four_minus_four_pow(self.H_star) * math.sqrt(self.n)
        if self.a >= cap:
            raise InfeasibleError(f"a={self.a!r} must be below (4 - 4^H*) sqrt(n) = {cap!r}")


@dataclass(frozen=True)
class TrialOutcome:
    seed: int
    s_n: float
    z_n: float
    hit_g: bool
    hit_h: bool
    z_exceeds: bool
    event_mismatch: bool
    maj_slack: float
    maj_holds: bool


@dataclass(frozen=True)
class CoverageReport:
    config: CoverageConfig
    trials: int
    hits_g: int
    hits_h: int
    coverage_g: float
    coverage_h: float
    phi: float
    z_exceed: int
    maj_violations: int
    event_mismatches: int
    min_maj_slack: float

    @property
    def coverage_floor(self):
        """phi minus three binomial standard errors."""
        return self.phi - 3.0 * math.sqrt(self.phi * (1.0 - self.phi) / self.trials)

    def as_dict(self):
        out = asdict(self)
        out["config"] = asdict(self.config)
        out["coverage_floor"] = self.coverage_floor
        return out


def trial_seed(seed, t):
    return (int(seed) ^ int(t)) & ((1 << 64) - 1)


def run_trial(config: CoverageConfig, t: int) -> TrialOutcome:
    seed = trial_seed(config.seed, t)
    path = sample_fbm(config.H_true, config.n, seed)
    diag = chaos_diagnostics(path, config.H_true, max_lag=config.max_lag)
    s = quadvar.s_n(path)
    res = confidence_interval(config.n, config.a, config.H_star, s)
    hit_h = res.contains_h(config.H_true)
    z_exceeds = abs(diag.z_value) > config.a
    # the two events coincide only when H* equals the true H
    mismatch = (
        config.H_star == config.H_true
        and hit_h == z_exceeds
        and abs(abs(diag.z_value) - config.a) > EVENT_TOL * max(1.0, config.a)
    )
    return TrialOutcome(
        seed=seed,
        s_n=s,
        z_n=diag.z_value,
        hit_g=res.contains_g(config.H_true),
        hit_h=hit_h,
        z_exceeds=z_exceeds,
        event_mismatch=mismatch,
        maj_slack=diag.slack,
        maj_holds=diag.holds,
    )


def run_coverage(config: CoverageConfig, workers=1) -> CoverageReport:
    """Simulate ``config.trials`` paths and count interval hits.

    Trial t uses seed ``config.seed XOR t``, so the report does not depend
    on ``workers``.
    """
    trials = range(config.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda t: run_trial(config, t), trials))
    else:
        outcomes = [run_trial(config, t) for t in trials]
    hits_g = sum(o.hit_g for o in outcomes)
    hits_h = sum(o.hit_h for o in outcomes)
    return CoverageReport(
        config=config,
        trials=config.trials,
        hits_g=hits_g,
        hits_h=hits_h,
        coverage_g=hits_g / config.trials,
        coverage_h=hits_h / config.trials,
        phi=confidence_level(config.n, config.a),
        z_exceed=sum(o.z_exceeds for o in outcomes),
        maj_violations=sum(not o.maj_holds for o in outcomes),
        event_mismatches=sum(o.event_mismatch for o in outcomes),
        min_maj_slack=min(o.maj_slack for o in outcomes),
    )


def verify_constants(grid_step=0.01, tol=1e-8, r_max=10_000):
    """Check the sum bound 17.75 and the per-term bound over a grid of H.

    The grid is ``grid_step, 2*grid_step, ...`` strictly inside (0, 1).
    """
    if not 0.0 < grid_step < 1.0:
        raise DomainError(f"grid_step must lie in (0, 1), got {grid_step!r}")
    count = int(round(1.0 / grid_step))
    grid = [round(k * grid_step, 12) for k in range(1, count + 1)]
    grid = [h for h in grid if 0.0 < h < 1.0]
    sums = [quadvar.rho_abs_sum(h, tol) for h in grid]
    violations = {h: quadvar.per_term_violations(h, r_max) for h in grid}
    worst = int(np.argmax(sums))
    n_viol = sum(violations.values())
    return {
        "grid_step": grid_step,
        "grid_size": len(grid),
        "tol": tol,
        "abs_sum_bound": quadvar.ABS_SUM_BOUND,
        "max_abs_sum": sums[worst],
        "argmax_H": grid[worst],
        "abs_sum_passed": max(sums) <= quadvar.ABS_SUM_BOUND,
        "per_term_constant": quadvar.PER_TERM_CONSTANT,
        "per_term_r_max": r_max,
        "per_term_violations": n_viol,
        "per_term_passed": n_viol == 0,
        "passed": max(sums) <= quadvar.ABS_SUM_BOUND and n_viol == 0,
    }
