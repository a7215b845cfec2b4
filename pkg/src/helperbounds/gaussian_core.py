"""Exact joint covariance of the Gaussian coding scheme and log-det information oracle.

The inner-bound construction draws everything from independent Gaussian
generators: the helper's two dirty-paper components X01' ~ N(0, gamma*P0')
and X02' ~ N(0, gamma_bar*P0'), the user signals X1, X2, the states S1, S2
and the receiver noises Z1, Z2.  The observable system is linear in these
generators:

    U  = eta1*X01' + alpha11*S1 + alpha12*S2          (scaled auxiliary 1)
    V  = eta2*(X02' + alpha20*X01') + alpha21*S1 + alpha22*S2
    X0 = X01' + X02' + beta1*S1 + beta2*S2
    Y1 = eta1*X0 + X1 + S1 + Z1
    Y2 = eta2*X0 + X2 + S2 + Z2

U and V carry an extra factor eta1 resp. eta2 relative to the raw codebook
auxiliaries; scaling a variable changes no mutual information, and it keeps
every entry polynomial in the parameters (no division by a gain).

This module is the ground-truth oracle: every closed-form rate elsewhere in
the package must agree with mutual informations computed here from the 9x9
covariance matrix by log-determinants.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    EPS_VAR,
    ChannelConfig,
    ConfigError,
    ConsistencyError,
    HelperStrategy,
    RatePair,
)

__all__ = [
    "VARIABLES",
    "CovarianceMatrix",
    "build_joint_covariance",
    "gaussian_mi",
    "gaussian_cmi",
    "oracle_rate_pair",
    "marton_rate_bounds",
]

#: Canonical variable order of the joint covariance matrix.
VARIABLES = ("U", "V", "X0", "X1", "X2", "S1", "S2", "Y1", "Y2")

_INDEX = {name: i for i, name in enumerate(VARIABLES)}

#: Mutual informations may come out this far below zero before we treat the
#: computation as inconsistent; anything in (-MI_NEG_TOL, 0) is clamped to 0.
MI_NEG_TOL = 1e-9

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric positive-semidefinite 9x9 covariance over ``VARIABLES``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (9, 9):
            raise ConfigError("covariance must be 9x9")
        if not np.all(np.isfinite(m)):
            raise ConfigError("covariance entries must be finite")
        m = 0.5 * (m + m.T)
        scale = max(1.0, float(np.max(np.diag(m))))
        if float(np.min(np.linalg.eigvalsh(m))) < -1e-9 * scale:
            raise ConfigError("covariance not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def entry(self, a: str, b: str) -> float:
        """Covariance of two canonical variables by name."""
        return float(self.matrix[_INDEX[a], _INDEX[b]])


def _linear_system(cfg: ChannelConfig, strat: HelperStrategy):
    """Mixing matrix M and generator variances d with observables = M @ latents.

    Latent order: (X01', X02', X1, X2, S1, S2, Z1, Z2).  Shared with the
    Monte Carlo sampler so analytic and empirical covariances describe the
    same generative model.
    """
    strat.validate_for(cfg)
    p0p = strat.p0_prime(cfg)
    d = np.array([
        strat.gamma * p0p,
        strat.gamma_bar * p0p,
        cfg.p1,
        cfg.p2,
        cfg.q1,
        cfg.q2,
        1.0,
        1.0,
    ])
    e1, e2 = cfg.eta1, cfg.eta2
    b1, b2 = strat.beta1, strat.beta2
    m = np.array([
        # X01'            X02'  X1   X2   S1                 S2                 Z1   Z2
        [e1,              0.0,  0.0, 0.0, strat.alpha11,     strat.alpha12,     0.0, 0.0],  # U
        [e2 * strat.alpha20, e2, 0.0, 0.0, strat.alpha21,    strat.alpha22,     0.0, 0.0],  # V
        [1.0,             1.0,  0.0, 0.0, b1,                b2,                0.0, 0.0],  # X0
        [0.0,             0.0,  1.0, 0.0, 0.0,               0.0,               0.0, 0.0],  # X1
        [0.0,             0.0,  0.0, 1.0, 0.0,               0.0,               0.0, 0.0],  # X2
        [0.0,             0.0,  0.0, 0.0, 1.0,               0.0,               0.0, 0.0],  # S1
        [0.0,             0.0,  0.0, 0.0, 0.0,               1.0,               0.0, 0.0],  # S2
        [e1,              e1,   1.0, 0.0, e1 * b1 + 1.0,     e1 * b2,           1.0, 0.0],  # Y1
        [e2,              e2,   0.0, 1.0, e2 * b1,           e2 * b2 + 1.0,     0.0, 1.0],  # Y2
    ])
    return m, d


def build_joint_covariance(cfg: ChannelConfig, strat: HelperStrategy) -> CovarianceMatrix:
    """Exact covariance of (U, V, X0, X1, X2, S1, S2, Y1, Y2)."""
    m, d = _linear_system(cfg, strat)
    cov = (m * d) @ m.T
    return CovarianceMatrix(cov)


def _resolve(variables) -> tuple[int, ...]:
    """Resolve variable names (or indices) to a sorted index tuple."""
    out = []
    for v in variables:
        if isinstance(v, str):
            if v not in _INDEX:
                raise ConfigError(f"unknown variable {v!r}")
            out.append(_INDEX[v])
        else:
            i = int(v)
            if not 0 <= i < 9:
                raise ConfigError(f"variable index {i} out of range")
            out.append(i)
    if len(set(out)) != len(out):
        raise ConfigError("duplicate variables in set")
    return tuple(sorted(out))


def _logdet(cov: np.ndarray, idx: tuple[int, ...]) -> float:
    """Pseudo log-determinant of a principal block.

    Coordinates with variance below ``EPS_VAR`` are dropped: a (numerically)
    constant variable carries no information, so this yields the analytic
    limit for degenerate auxiliaries instead of 0/0.  Returns ``-inf`` for a
    singular block of non-constant variables (infinite mutual information of
    linearly dependent coordinates).
    """
    live = [i for i in idx if cov[i, i] > EPS_VAR]
    if not live:
        return 0.0
    sub = cov[np.ix_(live, live)]
    sign, logdet = np.linalg.slogdet(sub)
    if sign <= 0.0:
        return -math.inf
    return float(logdet)


def _clamp_mi(bits: float) -> float:
    if bits < -MI_NEG_TOL:
        raise ConsistencyError(f"mutual information {bits:.3e} below -{MI_NEG_TOL}")
    return max(0.0, bits)


def gaussian_mi(cov: CovarianceMatrix, a, b) -> float:
    """I(A; B) in bits via 0.5*log(det S_A * det S_B / det S_AB).

    ``a`` and ``b`` are non-empty disjoint collections of canonical variable
    names (or indices).  May return ``inf`` when the joint block is singular
    while both marginals are not.
    """
    ia, ib = _resolve(a), _resolve(b)
    if not ia or not ib:
        raise ConfigError("variable sets must be non-empty")
    if set(ia) & set(ib):
        raise ConfigError("variable sets must be disjoint")
    m = cov.matrix
    bits = 0.5 * (_logdet(m, ia) + _logdet(m, ib) - _logdet(m, tuple(sorted(ia + ib)))) / _LN2
    if math.isnan(bits):
        raise ConsistencyError("mutual information is 0/0-degenerate")
    return _clamp_mi(bits) if math.isfinite(bits) else math.inf


def gaussian_cmi(cov: CovarianceMatrix, a, b, c=()) -> float:
    """I(A; B | C) in bits; with empty C this equals :func:`gaussian_mi`."""
    ia, ib, ic = _resolve(a), _resolve(b), _resolve(c)
    if not ia or not ib:
        raise ConfigError("variable sets must be non-empty")
    if (set(ia) & set(ib)) or (set(ia) & set(ic)) or (set(ib) & set(ic)):
        raise ConfigError("variable sets must be disjoint")
    if not ic:
        return gaussian_mi(cov, a, b)
    m = cov.matrix
    bits = 0.5 * (
        _logdet(m, tuple(sorted(ia + ic)))
        + _logdet(m, tuple(sorted(ib + ic)))
        - _logdet(m, ic)
        - _logdet(m, tuple(sorted(ia + ib + ic)))
    ) / _LN2
    if math.isnan(bits):
        raise ConsistencyError("conditional mutual information is 0/0-degenerate")
    return _clamp_mi(bits) if math.isfinite(bits) else math.inf


def _rate_terms(cov: CovarianceMatrix):
    """The six oracle mutual informations behind the per-user rate bounds."""
    i_ux1_y1 = gaussian_mi(cov, ("U", "X1"), ("Y1",))
    i_u_s = gaussian_mi(cov, ("U",), ("S1", "S2"))
    g1 = gaussian_cmi(cov, ("X1",), ("Y1",), ("U",))
    i_vx2_y2 = gaussian_mi(cov, ("V", "X2"), ("Y2",))
    i_v_us = gaussian_mi(cov, ("V",), ("U", "S1", "S2"))
    g2 = gaussian_cmi(cov, ("X2",), ("Y2",), ("V",))
    return i_ux1_y1, i_u_s, g1, i_vx2_y2, i_v_us, g2


def oracle_rate_pair(cfg: ChannelConfig, strat: HelperStrategy) -> RatePair:
    """Achievable rate pair of a strategy, from the covariance oracle.

    User 1 decodes its auxiliary first:
    ``r1 = min(I(U,X1;Y1) - I(U;S1,S2), I(X1;Y1|U))``; user 2's auxiliary is
    binned against the first one as well:
    ``r2 = min(I(V,X2;Y2) - I(V;U,S1,S2), I(X2;Y2|V))``.  Both are clamped at
    zero (an infinite binning penalty simply means that bound contributes no
    rate).
    """
    cov = build_joint_covariance(cfg, strat)
    i_ux1_y1, i_u_s, g1, i_vx2_y2, i_v_us, g2 = _rate_terms(cov)
    r1 = max(0.0, min(i_ux1_y1 - i_u_s, g1))
    r2 = max(0.0, min(i_vx2_y2 - i_v_us, g2))
    return RatePair(r1, r2)


def marton_rate_bounds(cfg: ChannelConfig, strat: HelperStrategy):
    """Per-user and sum bounds of the joint (Marton-style) inner bound.

    Returns ``(b1, b2, bsum)`` in bits, unclamped:

        b1   = min(I(U,X1;Y1) - I(U;S),  I(X1;Y1|U))
        b2   = min(I(V,X2;Y2) - I(V;S),  I(X2;Y2|V))
        bsum = min(b1_f + b2_f - I(V;U|S),  I(X1;Y1|U) + I(X2;Y2|V))

    where ``b?_f`` denotes the binning terms and S = (S1, S2).  The
    sequentially-binned rate pair of :func:`oracle_rate_pair` always sums to
    at most ``bsum`` because I(V;U,S) = I(V;S) + I(V;U|S).
    """
    cov = build_joint_covariance(cfg, strat)
    i_ux1_y1, i_u_s, g1, i_vx2_y2, _, g2 = _rate_terms(cov)
    i_v_s = gaussian_mi(cov, ("V",), ("S1", "S2"))
    i_v_u_given_s = gaussian_cmi(cov, ("V",), ("U",), ("S1", "S2"))
    f1 = i_ux1_y1 - i_u_s
    f2 = i_vx2_y2 - i_v_s
    b1 = min(f1, g1)
    b2 = min(f2, g2)
    bsum = min(f1 + f2 - i_v_u_given_s, g1 + g2)
    return b1, b2, bsum
