"""Partition channel parameters by which capacity-boundary segments are known.

At a witness (beta1, beta2, gamma) each user's parameters fall into exactly
one of three classes, decided by the two distinguished coefficient choices:

  * class A: the dirty-paper bound already binds there
    (f_k at the DPC-optimal coefficients <= g_k); the rate f_k is then a
    true capacity-boundary segment when gamma = 1 (user 1) or gamma = 0
    (user 2), with the state only partially cancelled.
  * class C: full cancellation is affordable (f_k at the cancelling
    coefficients >= g_k); the clean-channel rate 0.5*log2(1 + P_k) is a
    capacity-boundary segment.
  * class B: neither condition holds; that user's boundary segment is open.

Ties within 1e-12 resolve to the characterized class, A before C.
"""

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from . import closed_form as cf
from .inner_region import OptimizerBudget
from .model import ChannelConfig, ConfigError, HelperStrategy

__all__ = ["SegmentClass", "UserSegment", "SegmentReport", "classify", "capacity_segments"]

_TIE = 1e-12


class SegmentClass(Enum):
    A = "A"  # dirty-paper bound tight; state not fully cancelled
    B = "B"  # boundary segment not characterized
    C = "C"  # full cancellation; clean-channel rate


def classify(k: int, cfg: ChannelConfig, beta1: float, beta2: float,
             gamma: float) -> SegmentClass:
    """Class of user ``k`` at one witness (beta1, beta2, gamma)."""
    s_dpc = cf.star_strategy(cfg, beta1, beta2, gamma, kind1="dpc", kind2="dpc")
    if cf.rate_f(k, cfg, s_dpc) <= cf.rate_g(k, cfg, s_dpc) + _TIE:
        return SegmentClass.A
    s_can = cf.star_strategy(cfg, beta1, beta2, gamma, kind1="cancel", kind2="cancel")
    if cf.rate_f(k, cfg, s_can) >= cf.rate_g(k, cfg, s_can) - _TIE:
        return SegmentClass.C
    return SegmentClass.B


@dataclass(frozen=True)
class UserSegment:
    """Classification outcome for one user.

    ``rate`` is the characterized boundary rate (None for class B);
    ``dpc_rate``/``cancel_rate`` report both characterized candidates when
    witnesses for both classes exist.  The f/g values are evaluated at the
    reported witness.
    """

    user: int
    segment_class: str
    rate: float | None
    witness_beta1: float
    witness_beta2: float
    witness_gamma: float
    f_dpc: float
    g_dpc: float
    f_cancel: float
    g_cancel: float
    dpc_rate: float | None
    cancel_rate: float | None


@dataclass(frozen=True)
class SegmentReport:
    user1: UserSegment
    user2: UserSegment

    def as_dict(self) -> dict:
        return {"user1": asdict(self.user1), "user2": asdict(self.user2)}


def _classify_arrays(cfg: ChannelConfig, k: int, gamma: float, rho1, rho2):
    """Vectorized class masks and candidate rates over disk points."""
    p0s = cfg.p0
    b1 = rho1 * np.sqrt(p0s / cfg.q1) if cfg.q1 > 0.0 else np.zeros_like(rho1)
    b2 = rho2 * np.sqrt(p0s / cfg.q2) if cfg.q2 > 0.0 else np.zeros_like(rho2)
    p0p = cf._p0_prime(p0s, cfg.q1, cfg.q2, b1, b2)
    zero = np.zeros_like(b1)
    one = np.ones_like(b1)
    gam = gamma * one

    a11, a12 = cf._alpha_dpc1(cfg.eta1, p0p, b1, b2, gam)
    a20, a21, a22 = cf._alpha_dpc2(cfg.eta2, p0p, b1, b2, gam)
    f1, g1, f2, g2 = cf._rates_from_arrays(
        cfg.eta1, cfg.eta2, cfg.p0, cfg.p1, cfg.p2, cfg.q1, cfg.q2,
        a11, a12, a20, a21, a22, b1, b2, gam)
    f_dpc, g_dpc = (f1, g1) if k == 1 else (f2, g2)

    c11, c12 = 1.0 + cfg.eta1 * b1, cfg.eta1 * b2
    c21, c22 = cfg.eta2 * b1, 1.0 + cfg.eta2 * b2
    f1c, g1c, f2c, g2c = cf._rates_from_arrays(
        cfg.eta1, cfg.eta2, cfg.p0, cfg.p1, cfg.p2, cfg.q1, cfg.q2,
        c11, c12, one, c21, c22, b1, b2, gam)
    f_can, g_can = (f1c, g1c) if k == 1 else (f2c, g2c)

    in_a = f_dpc <= g_dpc + _TIE
    in_c = (~in_a) & (f_can >= g_can - _TIE)
    a_rate = cf._reduced_f_arrays(k, cfg.eta1, cfg.eta2, cfg.p0, cfg.p1,
                                  cfg.p2, cfg.q1, cfg.q2, b1, b2, gam)
    return in_a, in_c, a_rate, (f_dpc, g_dpc, f_can, g_can), (b1, b2)


def _disk_grid(lo1, hi1, lo2, hi2, n):
    g1 = np.linspace(lo1, hi1, n)
    g2 = np.linspace(lo2, hi2, n)
    r1, r2 = np.meshgrid(g1, g2, indexing="ij")
    r1, r2 = r1.ravel(), r2.ravel()
    keep = r1 ** 2 + r2 ** 2 <= 1.0
    return r1[keep], r2[keep]


def _segment_for_user(cfg: ChannelConfig, k: int, grid_n: int, zooms: int = 3) -> UserSegment:
    gamma = 1.0 if k == 1 else 0.0
    lo1, hi1, lo2, hi2 = -1.0, 1.0, -1.0, 1.0
    best = None  # (a_rate, rho1, rho2)
    c_witness = None  # (margin, rho1, rho2)
    any_a = False
    any_c = False
    for _ in range(zooms):
        r1, r2 = _disk_grid(lo1, hi1, lo2, hi2, grid_n)
        if r1.size == 0:
            break
        in_a, in_c, a_rate, (fd, gd, fc, gc), _ = _classify_arrays(cfg, k, gamma, r1, r2)
        any_a = any_a or bool(in_a.any())
        any_c = any_c or bool(in_c.any())
        if in_c.any():
            margins = np.where(in_c, fc - gc, -np.inf)
            j = int(np.argmax(margins))
            cand = (float(margins[j]), float(r1[j]), float(r2[j]))
            if c_witness is None or cand[0] > c_witness[0]:
                c_witness = cand
        if in_a.any():
            scores = np.where(in_a, a_rate, -np.inf)
            j = int(np.argmax(scores))
            cand = (float(scores[j]), float(r1[j]), float(r2[j]))
            if best is None or cand[0] > best[0]:
                best = cand
            # Zoom on the best class-A witness to polish the maximized rate.
            h1 = 1.5 * (hi1 - lo1) / (grid_n - 1)
            h2 = 1.5 * (hi2 - lo2) / (grid_n - 1)
            lo1, hi1 = max(-1.0, cand[1] - h1), min(1.0, cand[1] + h1)
            lo2, hi2 = max(-1.0, cand[2] - h2), min(1.0, cand[2] + h2)
        else:
            break

    if any_c:
        seg_class = SegmentClass.C
        rho1, rho2 = c_witness[1], c_witness[2]
        rate = 0.5 * math.log2(1.0 + (cfg.p1 if k == 1 else cfg.p2))
    elif any_a:
        seg_class = SegmentClass.A
        rho1, rho2 = best[1], best[2]
        rate = best[0]
    else:
        seg_class = SegmentClass.B
        rho1, rho2 = 0.0, 0.0
        rate = None

    w1 = np.array([rho1])
    w2 = np.array([rho2])
    _, _, _, (fd, gd, fc, gc), (b1, b2) = _classify_arrays(cfg, k, gamma, w1, w2)
    return UserSegment(
        user=k,
        segment_class=seg_class.value,
        rate=rate,
        witness_beta1=float(b1[0]),
        witness_beta2=float(b2[0]),
        witness_gamma=gamma,
        f_dpc=float(fd[0]),
        g_dpc=float(gd[0]),
        f_cancel=float(fc[0]),
        g_cancel=float(gc[0]),
        dpc_rate=best[0] if best is not None else None,
        cancel_rate=0.5 * math.log2(1.0 + (cfg.p1 if k == 1 else cfg.p2)) if any_c else None,
    )


def capacity_segments(cfg: ChannelConfig,
                      budget: OptimizerBudget | None = None) -> SegmentReport:
    """Classify both users, searching witnesses over the correlation disk.

    User 1 is examined at gamma = 1 and user 2 at gamma = 0 (the values that
    make the characterized rates meet the converse bound).  For class A, the
    reported rate is the best over class-A witnesses; class C always reports
    the clean-channel rate, which dominates every class-A rate, so it wins
    whenever a class-C witness exists.  Both candidates are retained in the
    report when both classes occur.
    """
    budget = budget or OptimizerBudget()
    grid_n = max(4 * budget.rho_grid + 5, 41)
    return SegmentReport(
        user1=_segment_for_user(cfg, 1, grid_n),
        user2=_segment_for_user(cfg, 2, grid_n),
    )
