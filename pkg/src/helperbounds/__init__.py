"""Rate-region bounds for two-user parallel Gaussian channels with a
state-cognitive helper.

The package computes, optimizes, classifies, and cross-validates inner and
outer bounds on the capacity region of a channel where independent additive
Gaussian interference on each subchannel is known ahead of time only to a
power-limited helper transmitter.
"""

from .classifier import SegmentClass, SegmentReport, UserSegment, capacity_segments, classify
from .closed_form import (
    SecondOrderStats,
    alpha_star_cancel,
    alpha_star_dpc,
    pp_helper_rate,
    rate_f,
    rate_g,
    reduced_f,
    second_order_stats,
    star_strategy,
)
from .gaussian_core import (
    VARIABLES,
    CovarianceMatrix,
    build_joint_covariance,
    gaussian_cmi,
    gaussian_mi,
    marton_rate_bounds,
    oracle_rate_pair,
)
from .inner_region import (
    OptimizerBudget,
    ScaledStrategy,
    achievable_point,
    inner_region_boundary,
    optimize_direction,
    region_contains,
    role_swap,
    time_sharing_boundary,
)
from .model import (
    ChannelConfig,
    ConfigError,
    ConsistencyError,
    CorrelationPoint,
    HelperBoundsError,
    HelperStrategy,
    RatePair,
    RegionBoundary,
    StrategyError,
    beta_from_rho,
    rho_from_beta,
    validate_config,
)
from .montecarlo import DEFAULT_MC_SEED, McReport, covariance_check, sample_empirical_covariance
from .outer_bound import OuterPoint, first_bound_terms, outer_rate_bounds, outer_region_boundary
from .verify import CheckResult, run_checks

__version__ = "0.1.0"

__all__ = [
    "ChannelConfig", "HelperStrategy", "CorrelationPoint", "RatePair",
    "RegionBoundary", "ScaledStrategy", "OptimizerBudget",
    "HelperBoundsError", "ConfigError", "StrategyError", "ConsistencyError",
    "validate_config", "beta_from_rho", "rho_from_beta",
    "VARIABLES", "CovarianceMatrix", "build_joint_covariance",
    "gaussian_mi", "gaussian_cmi", "oracle_rate_pair", "marton_rate_bounds",
    "SecondOrderStats", "second_order_stats", "rate_f", "rate_g",
    "alpha_star_dpc", "alpha_star_cancel", "star_strategy", "reduced_f",
    "pp_helper_rate",
    "OuterPoint", "first_bound_terms", "outer_rate_bounds", "outer_region_boundary",
    "achievable_point", "optimize_direction", "inner_region_boundary",
    "role_swap", "time_sharing_boundary", "region_contains",
    "SegmentClass", "UserSegment", "SegmentReport", "classify", "capacity_segments",
    "McReport", "DEFAULT_MC_SEED", "sample_empirical_covariance", "covariance_check",
    "CheckResult", "run_checks",
]
