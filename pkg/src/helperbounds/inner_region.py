"""Achievable-region tracing: strategy optimization, hull assembly, baselines.

A single strategy contributes the rectangle [0, min(f1,g1)] x [0, min(f2,g2)]
to the achievable region; the region traced here is the convex hull of all
such rectangles, for both decoder orderings (user roles swapped), closed
under time sharing.

Search space note: besides the eight strategy parameters, the optimizer may
scale the helper's transmit power down by a factor ``p0_scale`` in [0, 1].
The power constraint is an inequality, so running the same construction on a
config with ``p0`` replaced by ``p0_scale * p0`` is a legitimate strategy for
the original channel, and it is occasionally the only way to reach a corner
(a state-free channel is the extreme case: the best the helper can do is
stay silent).  Every vertex records its scale so it can be re-verified.
"""

import bisect
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import closed_form as cf
from .model import (
    ChannelConfig,
    ConfigError,
    CorrelationPoint,
    HelperStrategy,
    RatePair,
    RegionBoundary,
    beta_from_rho,
)

__all__ = [
    "OptimizerBudget",
    "ScaledStrategy",
    "achievable_point",
    "optimize_direction",
    "inner_region_boundary",
    "role_swap",
    "time_sharing_boundary",
    "region_contains",
]


@dataclass(frozen=True)
class OptimizerBudget:
    """Seed-grid densities and refinement effort for the strategy search.

    Grids are nested when densities step n -> 2n-1, which makes enlarging a
    budget monotone (a larger budget's seed set contains the smaller one's).
    """

    rho_grid: int = 9
    gamma_grid: int = 7
    power_grid: int = 5
    refine_iters: int = 160
    restarts: int = 2

    def __post_init__(self):
        for name in ("rho_grid", "gamma_grid", "power_grid", "refine_iters", "restarts"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.power_grid < 2:
            raise ConfigError("power_grid must include both endpoints (>= 2)")


@dataclass(frozen=True)
class ScaledStrategy:
    """A helper strategy together with the transmit-power fraction it assumes."""

    strategy: HelperStrategy
    p0_scale: float = 1.0

    def scaled_config(self, cfg: ChannelConfig) -> ChannelConfig:
        return replace(cfg, p0=self.p0_scale * cfg.p0)

    def rates(self, cfg: ChannelConfig) -> RatePair:
        return achievable_point(self.scaled_config(cfg), self.strategy)

    def provenance(self, **extra) -> dict:
        s = self.strategy
        tag = {
            "p0_scale": self.p0_scale,
            "beta1": s.beta1, "beta2": s.beta2, "gamma": s.gamma,
            "alpha11": s.alpha11, "alpha12": s.alpha12,
            "alpha20": s.alpha20, "alpha21": s.alpha21, "alpha22": s.alpha22,
        }
        tag.update(extra)
        return tag


def achievable_point(cfg: ChannelConfig, strat: HelperStrategy) -> RatePair:
    """Rate-rectangle corner (max(0, min(f1,g1)), max(0, min(f2,g2)))."""
    strat.validate_for(cfg)
    f1, g1, f2, g2 = cf._rates_from_arrays(*cf._strategy_arrays(cfg, strat))
    return RatePair(max(0.0, float(np.minimum(f1, g1))),
                    max(0.0, float(np.minimum(f2, g2))))


def role_swap(cfg: ChannelConfig) -> ChannelConfig:
    """Exchange the two users (gains, powers, states); an involution."""
    return cf._swap_users(cfg)


# ---------------------------------------------------------------------------
# Seed grid
# ---------------------------------------------------------------------------

_KINDS = (("dpc", "dpc"), ("dpc", "cancel"), ("cancel", "dpc"), ("cancel", "cancel"))


@lru_cache(maxsize=64)
def _seed_table(cfg: ChannelConfig, budget: OptimizerBudget):
    """Evaluate the distinguished-coefficient seed grid; returns flat arrays."""
    rho_lin = np.linspace(-1.0, 1.0, budget.rho_grid)
    rho_pairs = [(a, b) for a in rho_lin for b in rho_lin if a * a + b * b <= 1.0 + 1e-12]
    gammas = np.linspace(0.0, 1.0, budget.gamma_grid)
    zetas = np.linspace(0.0, 1.0, budget.power_grid)

    n_pairs, n_g, n_z = len(rho_pairs), len(gammas), len(zetas)
    rho1 = np.repeat(np.array([p[0] for p in rho_pairs]), n_g * n_z)
    rho2 = np.repeat(np.array([p[1] for p in rho_pairs]), n_g * n_z)
    gam = np.tile(np.repeat(gammas, n_z), n_pairs)
    zeta = np.tile(zetas, n_pairs * n_g)

    p0s = zeta * cfg.p0
    b1 = rho1 * np.sqrt(p0s / cfg.q1) if cfg.q1 > 0.0 else np.zeros_like(rho1)
    b2 = rho2 * np.sqrt(p0s / cfg.q2) if cfg.q2 > 0.0 else np.zeros_like(rho2)
    p0p = cf._p0_prime(p0s, cfg.q1, cfg.q2, b1, b2)

    blocks = []
    for kind1, kind2 in _KINDS:
        if kind1 == "dpc":
            a11, a12 = cf._alpha_dpc1(cfg.eta1, p0p, b1, b2, gam)
        else:
            a11, a12 = 1.0 + cfg.eta1 * b1, cfg.eta1 * b2
        if kind2 == "dpc":
            a20, a21, a22 = cf._alpha_dpc2(cfg.eta2, p0p, b1, b2, gam)
        else:
            a20 = np.ones_like(b1)
            a21, a22 = cfg.eta2 * b1, 1.0 + cfg.eta2 * b2
        f1, g1, f2, g2 = cf._rates_from_arrays(
            cfg.eta1, cfg.eta2, p0s, cfg.p1, cfg.p2, cfg.q1, cfg.q2,
            a11, a12, a20 * np.ones_like(b1), a21, a22, b1, b2, gam)
        r1 = np.maximum(0.0, np.minimum(f1, g1))
        r2 = np.maximum(0.0, np.minimum(f2, g2))
        blocks.append(dict(a11=a11 * np.ones_like(b1), a12=a12 * np.ones_like(b1),
                           a20=a20 * np.ones_like(b1), a21=a21 * np.ones_like(b1),
                           a22=a22 * np.ones_like(b1),
                           b1=b1, b2=b2, gamma=gam, zeta=zeta, r1=r1, r2=r2))
    keys = blocks[0].keys()
    return {k: np.concatenate([blk[k] for blk in blocks]) for k in keys}


def _candidate_from_params(cfg: ChannelConfig, rho1, rho2, gamma, zeta,
                           a11, a12, a20, a21, a22):
    """Clip raw parameters into the feasible set and build a ScaledStrategy."""
    radius = math.hypot(rho1, rho2)
    if radius > 1.0:
        rho1, rho2 = rho1 / radius, rho2 / radius
    gamma = min(1.0, max(0.0, gamma))
    zeta = min(1.0, max(0.0, zeta))
    scaled = replace(cfg, p0=zeta * cfg.p0)
    b1, b2 = beta_from_rho(scaled, CorrelationPoint(rho1, rho2))
    strat = HelperStrategy(a11, a12, a20, a21, a22, b1, b2, gamma)
    return ScaledStrategy(strat, zeta)


def optimize_direction(cfg: ChannelConfig, theta: float,
                       budget: OptimizerBudget | None = None):
    """Approximately maximize cos(theta)*r1 + sin(theta)*r2 over strategies.

    Seeds every combination of the distinguished coefficient choices over the
    (rho1, rho2, gamma, p0_scale) grid, then refines the best seeds with
    Nelder-Mead over all nine free parameters (the min() kinks rule out
    gradients).  The returned value is never below the best seed.

    Returns:
        (ScaledStrategy, RatePair) for the best point found.
    """
    from scipy.optimize import minimize

    if not 0.0 < theta < 0.5 * math.pi:
        raise ConfigError("direction angle must lie strictly inside (0, pi/2)")
    budget = budget or OptimizerBudget()
    table = _seed_table(cfg, budget)
    w1, w2 = math.cos(theta), math.sin(theta)
    scores = w1 * table["r1"] + w2 * table["r2"]
    order = np.argsort(-scores)

    q1, q2 = cfg.q1, cfg.q2

    def seed_vector(i):
        b1, b2, zeta = table["b1"][i], table["b2"][i], table["zeta"][i]
        p0s = zeta * cfg.p0
        rho1 = b1 * math.sqrt(q1 / p0s) if p0s > 0.0 and q1 > 0.0 else 0.0
        rho2 = b2 * math.sqrt(q2 / p0s) if p0s > 0.0 and q2 > 0.0 else 0.0
        return np.array([rho1, rho2, table["gamma"][i], zeta,
                         table["a11"][i], table["a12"][i], table["a20"][i],
                         table["a21"][i], table["a22"][i]])

    def objective(x):
        cand = _candidate_from_params(cfg, *x)
        r = cand.rates(cfg)
        return -(w1 * r.r1 + w2 * r.r2)

    best_i = int(order[0])
    best_x = seed_vector(best_i)
    best_val = float(scores[best_i])
    for i in order[: budget.restarts]:
        x0 = seed_vector(int(i))
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxiter": budget.refine_iters,
                                "xatol": 1e-10, "fatol": 1e-13})
        if -res.fun > best_val:
            best_val = -float(res.fun)
            best_x = np.asarray(res.x)

    cand = _candidate_from_params(cfg, *best_x)
    return cand, cand.rates(cfg)


# ---------------------------------------------------------------------------
# Region assembly
# ---------------------------------------------------------------------------

def _concave_envelope(pts, tags):
    """Upper concave envelope of Pareto-sorted points (Graham-style scan)."""
    stack = []
    for p, t in zip(pts, tags):
        while len(stack) >= 2:
            a, b = stack[-2][0], stack[-1][0]
            cross = (b.r1 - a.r1) * (p.r2 - a.r2) - (b.r2 - a.r2) * (p.r1 - a.r1)
            if cross >= -1e-12:
                stack.pop()  # middle point on/below the chord
            else:
                break
        stack.append((p, t))
    return [p for p, _ in stack], [t for _, t in stack]


def inner_region_boundary(cfg: ChannelConfig, resolution: int = 17,
                          budget: OptimizerBudget | None = None) -> RegionBoundary:
    """Convex Pareto frontier of the achievable region.

    Combines direction-optimized strategies for both decoder orderings with
    the single-user extreme points, then takes the Pareto set's concave
    envelope (mixtures along the polyline edges are realized by time
    sharing).  Every vertex carries the strategy (and power scale, and
    ordering) that achieves it.
    """
    if resolution < 8:
        raise ConfigError("resolution must be at least 8")
    budget = budget or OptimizerBudget()

    pts, tags = [], []

    def consider(point: RatePair, tag: dict):
        pts.append(point)
        tags.append(tag)

    thetas = [(i + 0.5) * (0.5 * math.pi) / resolution for i in range(resolution)]
    for order, cfg_o in (("12", cfg), ("21", role_swap(cfg))):
        for k in (1, 2):
            rate, strat = cf._pp_strategy(k, cfg_o)
            cand = ScaledStrategy(strat, 1.0)
            r = cand.rates(cfg_o)
            point = r if order == "12" else RatePair(r.r2, r.r1)
            consider(point, cand.provenance(order=order, kind="single_user", user=k))
        for theta in thetas:
            cand, r = optimize_direction(cfg_o, theta, budget)
            point = r if order == "12" else RatePair(r.r2, r.r1)
            consider(point, cand.provenance(order=order, kind="direction", theta=theta))

    pareto = RegionBoundary.from_candidates(pts, tags)
    hull_pts, hull_tags = _concave_envelope(list(pareto.points),
                                            list(pareto.provenance))
    return RegionBoundary(tuple(hull_pts), tuple(hull_tags))


def time_sharing_boundary(cfg: ChannelConfig, resolution: int = 33) -> RegionBoundary:
    """Alternating single-user assistance: the segment between the two
    helper-assisted single-user points, with the idle user silent."""
    if resolution < 2:
        raise ConfigError("resolution must be at least 2")
    pp1 = cf.pp_helper_rate(1, cfg)
    pp2 = cf.pp_helper_rate(2, cfg)
    lambdas = np.linspace(0.0, 1.0, resolution)
    pts = [RatePair(lam * pp1, (1.0 - lam) * pp2) for lam in lambdas]
    tags = [{"lambda": float(lam)} for lam in lambdas]
    return RegionBoundary.from_candidates(pts, tags)


def region_contains(boundary: RegionBoundary, p: RatePair, tol: float = 1e-9) -> bool:
    """True iff ``p`` is dominated by the region under the boundary polyline."""
    pts = boundary.points
    if p.r1 <= pts[0].r1 + tol:
        return p.r2 <= pts[0].r2 + tol
    if p.r1 > pts[-1].r1 + tol:
        return False
    x = min(p.r1, pts[-1].r1)
    xs = [q.r1 for q in pts]
    i = min(max(bisect.bisect_right(xs, x) - 1, 0), len(pts) - 2)
    a, b = pts[i], pts[i + 1]
    y = a.r2 + (b.r2 - a.r2) * (x - a.r1) / (b.r1 - a.r1)
    return p.r2 <= y + tol
