"""Exact confidence intervals for the Hurst parameter of fractional Brownian motion.

Observe a path at times k/n, compute the second-order quadratic variation
S_n, and turn a concentration bound for it into an interval that contains H
with a guaranteed, non-asymptotic probability.
"""

from .concentration import (
    ChaosDiagnostics,
    GaussianQuadraticSpec,
    TailParams,
    chaos_diagnostics,
    hurst_alpha_beta,
    q1,
    q2,
    tail_bound,
    uniform_z_tail_bound,
)
from .errors import (
    BelowRangeError,
    DegeneratePathError,
    DomainError,
    HurstCIError,
    InfeasibleError,
    PathFormatError,
    SimulationError,
)
from .fbm_sim import PathSample, fgn_covariance, sample_fbm, sample_fbm_batch
from .harness import CoverageConfig, CoverageReport, load_path_csv, run_coverage, verify_constants
from .interval import (
    ConfidenceResult,
    PlanResult,
    confidence_interval,
    confidence_level,
    g,
    g_inverse,
    interval_for_g,
    interval_for_h,
    interval_length_bound,
    plan_fixed_n,
    plan_unbounded,
)
from .kernels import BACKEND
from .quadvar import rho, rho_abs_sum, s_n, second_differences, z_n

__version__ = "0.1.0"
