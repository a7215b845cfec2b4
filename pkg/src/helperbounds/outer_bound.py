"""Converse (outer) bound on the rate region and its Pareto frontier.

For a correlation point (rho1, rho2) in the unit disk (rho_j is the
normalized correlation the helper signal may have with state j), every
achievable pair must satisfy, for k = 1, 2,

    R_k <= min( 0.5*log2(1 + P_k / (eta_k^2 P0 + 2 eta_k rho_k sqrt(P0 Q_k) + Q_k + 1))
                 + 0.5*log2((1 - rho1^2 - rho2^2) eta_k^2 P0 + 1),
                0.5*log2(1 + P_k) )

for some feasible (rho1, rho2).  The outer region is the union over the disk
of the boxes these caps describe; this module traces its upper-right Pareto
frontier.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import ChannelConfig, ConfigError, CorrelationPoint, RatePair, RegionBoundary

__all__ = [
    "OuterPoint",
    "first_bound_terms",
    "outer_rate_bounds",
    "outer_region_boundary",
]


@dataclass(frozen=True)
class OuterPoint:
    """Rate caps produced by one correlation point."""

    rho: CorrelationPoint
    ub1: float
    ub2: float


def _half_log2(x):
    return 0.5 * np.log2(x)


def _terms(cfg: ChannelConfig, rho1, rho2):
    """Vectorized pre-min bound terms (t1, t2) for both users."""
    residual = np.maximum(0.0, 1.0 - rho1 ** 2 - rho2 ** 2)
    out = []
    for eta, p, q, rho in ((cfg.eta1, cfg.p1, cfg.q1, rho1),
                           (cfg.eta2, cfg.p2, cfg.q2, rho2)):
        den = eta ** 2 * cfg.p0 + 2.0 * eta * rho * np.sqrt(cfg.p0 * q) + q + 1.0
        out.append(_half_log2(1.0 + p / den) + _half_log2(residual * eta ** 2 * cfg.p0 + 1.0))
    return out[0], out[1]


def first_bound_terms(cfg: ChannelConfig, rho: CorrelationPoint) -> tuple[float, float]:
    """The non-trivial bound terms before taking the min with the clean-channel caps."""
    t1, t2 = _terms(cfg, rho.rho1, rho.rho2)
    return float(t1), float(t2)


def _caps(cfg: ChannelConfig) -> tuple[float, float]:
    return 0.5 * math.log2(1.0 + cfg.p1), 0.5 * math.log2(1.0 + cfg.p2)


def outer_rate_bounds(cfg: ChannelConfig, rho: CorrelationPoint) -> tuple[float, float]:
    """Per-user rate caps (ub1, ub2) at one correlation point, in bits."""
    t1, t2 = first_bound_terms(cfg, rho)
    c1, c2 = _caps(cfg)
    return min(t1, c1), min(t2, c2)


def _axis_max(cfg: ChannelConfig, user: int):
    """Max of ub_user over the disk; the other correlation is zero there.

    The off-user correlation only shrinks the residual helper power, so the
    maximizer always has rho_other = 0, reducing this to a 1-D search.
    """
    from scipy.optimize import minimize_scalar

    def value(r):
        r1, r2 = (r, 0.0) if user == 1 else (0.0, r)
        t1, t2 = _terms(cfg, r1, r2)
        return float(t1 if user == 1 else t2)

    grid = np.linspace(-1.0, 1.0, 513)
    vals = np.array([value(r) for r in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(0, i - 1)], grid[min(len(grid) - 1, i + 1)]
    res = minimize_scalar(lambda r: -value(float(np.clip(r, -1.0, 1.0))),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    best_r = float(np.clip(res.x, -1.0, 1.0))
    best = max(value(best_r), float(vals[i]))
    if best < vals[i]:
        best_r = float(grid[i])
    cap = _caps(cfg)[user - 1]
    return min(best, cap), best_r


def _constrained_max(cfg: ChannelConfig, level: float, constrain_user: int,
                     anchor=None, zooms: int = 5, grid_n: int = 129):
    """Maximize ub_other subject to ub_constrain_user >= level, over the disk.

    Zooming grid search.  ``anchor`` is an optional iterable of (rho1, rho2)
    points known or likely to satisfy the constraint (the unconstrained
    maximizer of the constrained user's bound, warm starts from neighbouring
    levels); when the feasible set is a sliver thinner than a grid cell, the
    zoom contracts around the best anchor.  Returns
    (best_value_of_other, ub_of_constrained_user, rho1, rho2), or None if no
    feasible point is found.
    """
    c1, c2 = _caps(cfg)
    if (c1 if constrain_user == 1 else c2) < level - 1e-12:
        return None

    def evaluate(r1, r2):
        t1, t2 = _terms(cfg, r1, r2)
        ub1 = np.minimum(t1, c1)
        ub2 = np.minimum(t2, c2)
        con, obj = (ub1, ub2) if constrain_user == 1 else (ub2, ub1)
        feasible = (r1 ** 2 + r2 ** 2 <= 1.0) & (con >= level - 1e-12)
        return con, obj, feasible

    best = None
    for a in (anchor or ()):
        a1, a2 = (np.array([a[0]]), np.array([a[1]]))
        con, obj, feas = evaluate(a1, a2)
        cand = (float(obj[0]), float(con[0]), float(a1[0]), float(a2[0]))
        if feas[0] and (best is None or cand[0] > best[0]):
            best = cand

    window = ((-1.0, 1.0), (-1.0, 1.0))
    for _ in range(zooms):
        (lo1, hi1), (lo2, hi2) = window
        g1 = np.linspace(lo1, hi1, grid_n)
        g2 = np.linspace(lo2, hi2, grid_n)
        r1, r2 = np.meshgrid(g1, g2, indexing="ij")
        con, obj, feasible = evaluate(r1, r2)
        if feasible.any():
            score = np.where(feasible, obj, -np.inf)
            i, j = np.unravel_index(int(np.argmax(score)), score.shape)
            cand = (float(score[i, j]), float(con[i, j]), float(g1[i]), float(g2[j]))
            if best is None or cand[0] > best[0]:
                best = cand
            cx, cy = cand[2], cand[3]
            h1 = 1.5 * (hi1 - lo1) / (grid_n - 1)
            h2 = 1.5 * (hi2 - lo2) / (grid_n - 1)
        elif best is not None:
            # Contract around the incumbent; a denser grid will re-enter the
            # feasible sliver near it.
            cx, cy = best[2], best[3]
            h1 = 0.125 * (hi1 - lo1)
            h2 = 0.125 * (hi2 - lo2)
        else:
            return None
        window = ((max(-1.0, cx - h1), min(1.0, cx + h1)),
                  (max(-1.0, cy - h2), min(1.0, cy + h2)))
    return best


def outer_region_boundary(cfg: ChannelConfig, resolution: int = 64) -> RegionBoundary:
    """Pareto frontier of the outer region as a sorted polyline.

    The frontier is traced by constrained sweeps: the two axis extremes are
    solved to high accuracy, then for ``resolution`` levels t between them
    the best ub2 subject to ub1 >= t is located by a zooming grid search
    over the full disk (both correlation signs matter; favourable
    correlations are typically negative for positive gains).
    """
    if resolution < 8:
        raise ConfigError("resolution must be at least 8")
    r1_max, rho_at_r1max = _axis_max(cfg, 1)
    r2_max, rho_at_r2max = _axis_max(cfg, 2)

    pts, tags = [], []

    def add(ub1, ub2, rho1, rho2):
        pts.append(RatePair(max(0.0, ub1), max(0.0, ub2)))
        tags.append({"rho1": rho1, "rho2": rho2})

    # Exact axis-extreme vertices from the 1-D solves.
    for rho in (CorrelationPoint(rho_at_r1max, 0.0), CorrelationPoint(0.0, rho_at_r2max)):
        ub1, ub2 = outer_rate_bounds(cfg, rho)
        add(ub1, ub2, rho.rho1, rho.rho2)

    # Best partner rate along each axis extreme (handles cap plateaus), then
    # the interior levels.  Vertices record the achieved pair, so every
    # point on the polyline is a genuine (ub1, ub2) evaluation.  The 1-D
    # argmaxes are feasible anchors for every level below the axis maximum.
    anchor1 = (rho_at_r1max, 0.0)
    anchor2 = (0.0, rho_at_r2max)
    right = _constrained_max(cfg, r1_max - 1e-11, 1, anchor=anchor1)
    if right is not None:
        add(right[1], right[0], right[2], right[3])
    left = _constrained_max(cfg, r2_max - 1e-11, 2, anchor=anchor2)
    if left is not None:
        add(left[0], left[1], left[2], left[3])

    x_left = left[0] if left is not None else 0.0
    levels = np.linspace(x_left, r1_max, resolution + 2)[1:-1]
    for t in levels:
        sol = _constrained_max(cfg, float(t), 1, anchor=anchor1)
        if sol is not None:
            add(sol[1], sol[0], sol[2], sol[3])

    return RegionBoundary.from_candidates(pts, tags)
