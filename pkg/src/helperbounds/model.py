"""Domain types and parameter conversions for the helper-assisted parallel channel.

The physical model is a two-user parallel Gaussian channel

    Y1 = eta1*X0 + X1 + S1 + Z1,    Y2 = eta2*X0 + X2 + S2 + Z2,

where Z1, Z2 are unit-variance Gaussian noise, S1 ~ N(0, Q1) and S2 ~ N(0, Q2)
are independent additive interference ("state") terms, and X0 is the signal of
a helper that knows both state sequences ahead of time and spends power P0 to
mitigate them.  Users 1 and 2 transmit with powers P1 and P2.

All rates produced by this package are in bits per channel use (logs base 2).
Everything here is immutable and pure, so unrestricted concurrent use is safe.
"""

import math
from dataclasses import dataclass

__all__ = [
    "HelperBoundsError",
    "ConfigError",
    "StrategyError",
    "ConsistencyError",
    "ChannelConfig",
    "HelperStrategy",
    "CorrelationPoint",
    "RatePair",
    "RegionBoundary",
    "validate_config",
    "beta_from_rho",
    "rho_from_beta",
]

#: Variances below this threshold are treated as exactly degenerate.
EPS_VAR = 1e-12

#: Slack allowed on quadratic constraints (unit disk, power budget) to absorb
#: floating-point round-off from parameter transforms.
CONSTRAINT_SLACK = 1e-9


class HelperBoundsError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HelperBoundsError, ValueError):
    """A channel configuration violates an invariant."""


class StrategyError(HelperBoundsError, ValueError):
    """A helper strategy violates an invariant (e.g. the power budget)."""


class ConsistencyError(HelperBoundsError, ArithmeticError):
    """An internal numerical identity failed beyond tolerance."""


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{name} not finite")
    return value


@dataclass(frozen=True)
class ChannelConfig:
    """The seven physical channel parameters.

    Attributes:
        eta1, eta2: real gains from the helper to receivers 1 and 2.
        p0: helper power budget (linear, >= 0).
        p1, p2: user transmit powers (linear, >= 0).
        q1, q2: state powers (linear, >= 0).

    Receiver noise variances are fixed at 1.
    """

    eta1: float
    eta2: float
    p0: float
    p1: float
    p2: float
    q1: float
    q2: float

    def __post_init__(self):
        for name in ("eta1", "eta2", "p0", "p1", "p2", "q1", "q2"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        for name in ("p0", "p1", "p2", "q1", "q2"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} negative")


def validate_config(eta1, eta2, p0, p1, p2, q1, q2) -> ChannelConfig:
    """Validate seven raw numbers and return a ``ChannelConfig``.

    Raises:
        ConfigError: naming the violated invariant, e.g. ``"p0 negative"``.
    """
    return ChannelConfig(eta1, eta2, p0, p1, p2, q1, q2)


@dataclass(frozen=True)
class HelperStrategy:
    """Free parameters of the Gaussian inner-bound construction.

    The helper splits its signal into a dirty-paper part (fresh Gaussian power
    ``p0_prime`` shared between the two users by ``gamma``) and a direct
    state-cancellation part ``beta1*S1 + beta2*S2``.  The five alpha
    coefficients weight the states (and, for user 2, the first user's helper
    component) inside the two auxiliary codebook variables.

    The direct-cancellation power must fit the helper budget:
    ``beta1**2 * q1 + beta2**2 * q2 <= p0``; the remainder
    ``p0_prime = p0 - beta1**2 * q1 - beta2**2 * q2`` is spent on dirty-paper
    coding, so the helper always transmits at full power.
    """

    alpha11: float
    alpha12: float
    alpha20: float
    alpha21: float
    alpha22: float
    beta1: float
    beta2: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha11", "alpha12", "alpha20", "alpha21", "alpha22",
                     "beta1", "beta2", "gamma"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise StrategyError(f"{name} not finite")
            object.__setattr__(self, name, value)
        if not -CONSTRAINT_SLACK <= self.gamma <= 1.0 + CONSTRAINT_SLACK:
            raise StrategyError("gamma outside [0, 1]")
        object.__setattr__(self, "gamma", min(1.0, max(0.0, self.gamma)))

    @property
    def gamma_bar(self) -> float:
        return 1.0 - self.gamma

    def cancel_power(self, cfg: ChannelConfig) -> float:
        """Helper power consumed by direct state cancellation."""
        return self.beta1 ** 2 * cfg.q1 + self.beta2 ** 2 * cfg.q2

    def p0_prime(self, cfg: ChannelConfig) -> float:
        """Helper power left for dirty-paper coding; clipped at 0."""
        return max(0.0, cfg.p0 - self.cancel_power(cfg))

    def validate_for(self, cfg: ChannelConfig) -> None:
        """Raise ``StrategyError`` if the power budget is exceeded."""
        spent = self.cancel_power(cfg)
        if spent > cfg.p0 * (1.0 + CONSTRAINT_SLACK) + CONSTRAINT_SLACK:
            raise StrategyError(
                f"cancellation power {spent:.6g} exceeds helper budget {cfg.p0:.6g}"
            )


@dataclass(frozen=True)
class CorrelationPoint:
    """Correlations (rho1, rho2) between the helper signal and each state.

    Feasible points lie in the closed unit disk: rho1**2 + rho2**2 <= 1.
    """

    rho1: float
    rho2: float

    def __post_init__(self):
        object.__setattr__(self, "rho1", _require_finite("rho1", self.rho1))
        object.__setattr__(self, "rho2", _require_finite("rho2", self.rho2))
        if self.rho1 ** 2 + self.rho2 ** 2 > 1.0 + CONSTRAINT_SLACK:
            raise ConfigError("correlation point outside the unit disk")

    @property
    def radius_sq(self) -> float:
        return self.rho1 ** 2 + self.rho2 ** 2


@dataclass(frozen=True)
class RatePair:
    """A point (r1, r2) in bits per channel use."""

    r1: float
    r2: float

    def __post_init__(self):
        object.__setattr__(self, "r1", _require_finite("r1", self.r1))
        object.__setattr__(self, "r2", _require_finite("r2", self.r2))
        if self.r1 < 0.0 or self.r2 < 0.0:
            raise ConfigError("rates must be nonnegative")

    def dominates(self, other: "RatePair", tol: float = 0.0) -> bool:
        """Componentwise >= within ``tol``."""
        return self.r1 >= other.r1 - tol and self.r2 >= other.r2 - tol


def beta_from_rho(cfg: ChannelConfig, rho: CorrelationPoint) -> tuple[float, float]:
    """Map disk correlations to direct-cancellation gains.

    ``beta_j = rho_j * sqrt(p0 / q_j)``; a state with ``q_j = 0`` needs no
    cancellation, so its beta is defined as 0.  The result always satisfies
    the helper power budget when ``rho`` lies in the unit disk, because
    ``beta1**2 q1 + beta2**2 q2 = (rho1**2 + rho2**2) * p0 <= p0``.
    """
    beta1 = rho.rho1 * math.sqrt(cfg.p0 / cfg.q1) if cfg.q1 > 0.0 else 0.0
    beta2 = rho.rho2 * math.sqrt(cfg.p0 / cfg.q2) if cfg.q2 > 0.0 else 0.0
    return beta1, beta2


def rho_from_beta(cfg: ChannelConfig, beta1: float, beta2: float) -> CorrelationPoint:
    """Inverse of :func:`beta_from_rho`; requires helper power when beta != 0."""
    if cfg.p0 <= 0.0:
        if beta1 != 0.0 or beta2 != 0.0:
            raise ConfigError("helper has no power")
        return CorrelationPoint(0.0, 0.0)
    rho1 = beta1 * math.sqrt(cfg.q1 / cfg.p0)
    rho2 = beta2 * math.sqrt(cfg.q2 / cfg.p0)
    return CorrelationPoint(rho1, rho2)


@dataclass(frozen=True)
class RegionBoundary:
    """Upper-right Pareto frontier of a rate region.

    ``points`` is ordered with r1 strictly increasing and r2 strictly
    decreasing; the region described is the lower-left closure of the
    polyline through these vertices.  ``provenance`` optionally carries one
    JSON-serializable dict per vertex recording how the vertex is achieved.
    """

    points: tuple[RatePair, ...]
    provenance: tuple[dict, ...] | None = None

    def __post_init__(self):
        if not self.points:
            raise ConfigError("boundary must contain at least one point")
        if self.provenance is not None and len(self.provenance) != len(self.points):
            raise ConfigError("provenance length mismatch")
        for a, b in zip(self.points, self.points[1:]):
            if not (b.r1 > a.r1 - EPS_VAR and b.r2 < a.r2 + EPS_VAR):
                raise ConfigError("boundary not Pareto-sorted")

    @property
    def r1_max(self) -> float:
        return self.points[-1].r1

    @property
    def r2_max(self) -> float:
        return self.points[0].r2

    @staticmethod
    def from_candidates(points, provenance=None, dedupe_tol: float = 1e-12) -> "RegionBoundary":
        """Pareto-filter arbitrary candidate points into a sorted boundary.

        Dominated candidates are dropped; near-duplicates (within
        ``dedupe_tol`` in both coordinates) are merged keeping the first.
        """
        items = list(zip(points, provenance if provenance is not None
                         else [None] * len(points)))
        if not items:
            raise ConfigError("no candidate points")
        # Classic 2-D maxima scan: sweep r1 descending and keep points whose
        # r2 strictly exceeds the running maximum.
        items.sort(key=lambda it: (-it[0].r1, -it[0].r2))
        kept = []
        best_r2 = -math.inf
        for pt, tag in items:
            if pt.r2 > best_r2 + dedupe_tol:
                if kept and abs(pt.r1 - kept[-1][0].r1) <= dedupe_tol:
                    kept.pop()  # merge near-duplicate r1, keep larger r2
                kept.append((pt, tag))
                best_r2 = pt.r2
        kept.reverse()
        pts = tuple(pt for pt, _ in kept)
        tags = tuple(tag for _, tag in kept)
        if provenance is None:
            return RegionBoundary(pts)
        return RegionBoundary(pts, tags)
