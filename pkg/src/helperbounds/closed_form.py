"""Closed-form rate expressions for the Gaussian inner bound.

For each user k the achievable rate is min(f_k, g_k), where

    f_k = 0.5*log2( n_k * s2_yk / h_k )          (dirty-paper/binning bound)
    g_k = 0.5*log2( 1 + p_k * s2_uk / h_k )      (decoding bound)

with n_1 = eta1^2*gamma*p0', n_2 = eta2^2*gamma_bar*p0' the fresh helper power
seen inside each auxiliary, and

    h_k = s2_yk_given_xk * s2_uk - s_ukyk^2

the Gram determinant of (Y_k - X_k, aux_k).  All second-order quantities are
polynomials in the channel and strategy parameters; h_k is evaluated as an
explicit sum of nonnegative products (Cauchy-Binet over the independent
generators), which is algebraically identical to the product-minus-square
form but immune to the catastrophic cancellation that form suffers near the
state-cancelling coefficient choices.

Every function broadcasts over numpy arrays; scalars in, floats out.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import EPS_VAR, ChannelConfig, ConfigError, HelperStrategy

__all__ = [
    "SecondOrderStats",
    "second_order_stats",
    "rate_f",
    "rate_g",
    "alpha_star_dpc",
    "alpha_star_cancel",
    "star_strategy",
    "reduced_f",
    "pp_helper_rate",
]

_LN2 = math.log(2.0)


def _half_log2(x):
    return 0.5 * np.log2(x)


# ---------------------------------------------------------------------------
# Second-order statistics (vectorized kernels)
# ---------------------------------------------------------------------------

def _p0_prime(p0, q1, q2, b1, b2):
    return np.maximum(0.0, p0 - b1 ** 2 * q1 - b2 ** 2 * q2)


def _sigma2_y(eta, p0, p, q, beta):
    return eta ** 2 * p0 + (2.0 * beta * eta + 1.0) * q + p + 1.0


def _sigma2_y_given_x(eta, p0, q, beta):
    return eta ** 2 * p0 + (2.0 * beta * eta + 1.0) * q + 1.0


def _sigma2_u1(eta1, q1, q2, a11, a12, gamma, p0p):
    return eta1 ** 2 * gamma * p0p + a11 ** 2 * q1 + a12 ** 2 * q2


def _sigma2_u2(eta2, q1, q2, a20, a21, a22, gamma, p0p):
    return eta2 ** 2 * ((1.0 - gamma) + a20 ** 2 * gamma) * p0p + a21 ** 2 * q1 + a22 ** 2 * q2


def _sigma_u1y1(eta1, q1, q2, a11, a12, b1, b2, gamma, p0p):
    return eta1 ** 2 * gamma * p0p + (1.0 + b1 * eta1) * a11 * q1 + a12 * b2 * eta1 * q2


def _sigma_u2y2(eta2, q1, q2, a20, a21, a22, b1, b2, gamma, p0p):
    gbar = 1.0 - gamma
    return eta2 ** 2 * (gbar * p0p + a20 * gamma * p0p) + a22 * q2 * (1.0 + b2 * eta2) + a21 * b1 * eta2 * q1


def _h1(eta1, q1, q2, a11, a12, b1, b2, gamma, p0p):
    """Gram determinant of (Y1 - X1, U) as a sum of nonnegative terms."""
    gbar = 1.0 - gamma
    e2 = eta1 ** 2
    return (
        gamma * gbar * p0p ** 2 * e2 ** 2
        + gamma * p0p * e2 * (q1 * (a11 - 1.0 - eta1 * b1) ** 2
                              + q2 * (a12 - eta1 * b2) ** 2 + 1.0)
        + gbar * p0p * e2 * (q1 * a11 ** 2 + q2 * a12 ** 2)
        + q1 * q2 * ((1.0 + eta1 * b1) * a12 - eta1 * b2 * a11) ** 2
        + q1 * a11 ** 2 + q2 * a12 ** 2
    )


def _h2(eta2, q1, q2, a20, a21, a22, b1, b2, gamma, p0p):
    """Gram determinant of (Y2 - X2, V) as a sum of nonnegative terms."""
    gbar = 1.0 - gamma
    e2 = eta2 ** 2
    return (
        gamma * gbar * p0p ** 2 * e2 ** 2 * (1.0 - a20) ** 2
        + gamma * p0p * e2 * (q1 * (a21 - eta2 * b1 * a20) ** 2
                              + q2 * (a22 - (1.0 + eta2 * b2) * a20) ** 2 + a20 ** 2)
        + gbar * p0p * e2 * (q1 * (a21 - eta2 * b1) ** 2
                             + q2 * (a22 - 1.0 - eta2 * b2) ** 2 + 1.0)
        + q1 * q2 * (eta2 * b1 * a22 - (1.0 + eta2 * b2) * a21) ** 2
        + q1 * a21 ** 2 + q2 * a22 ** 2
    )


@dataclass(frozen=True)
class SecondOrderStats:
    """Variances and covariances entering the closed-form rates.

    ``h1``/``h2`` are the Gram determinants
    ``s2_yk_given_xk * s2_uk - s_ukyk**2``; they are nonnegative by
    Cauchy-Schwarz and vanish only together with ``s2_uk``.
    """

    sigma2_y1: float
    sigma2_y2: float
    sigma2_y1_given_x1: float
    sigma2_y2_given_x2: float
    sigma2_u1: float
    sigma2_u2: float
    sigma_u1y1: float
    sigma_u2y2: float
    h1: float
    h2: float


def second_order_stats(cfg: ChannelConfig, strat: HelperStrategy) -> SecondOrderStats:
    """Evaluate all second-order quantities for one strategy."""
    strat.validate_for(cfg)
    p0p = strat.p0_prime(cfg)
    a11, a12 = strat.alpha11, strat.alpha12
    a20, a21, a22 = strat.alpha20, strat.alpha21, strat.alpha22
    b1, b2, g = strat.beta1, strat.beta2, strat.gamma
    return SecondOrderStats(
        sigma2_y1=float(_sigma2_y(cfg.eta1, cfg.p0, cfg.p1, cfg.q1, b1)),
        sigma2_y2=float(_sigma2_y(cfg.eta2, cfg.p0, cfg.p2, cfg.q2, b2)),
        sigma2_y1_given_x1=float(_sigma2_y_given_x(cfg.eta1, cfg.p0, cfg.q1, b1)),
        sigma2_y2_given_x2=float(_sigma2_y_given_x(cfg.eta2, cfg.p0, cfg.q2, b2)),
        sigma2_u1=float(_sigma2_u1(cfg.eta1, cfg.q1, cfg.q2, a11, a12, g, p0p)),
        sigma2_u2=float(_sigma2_u2(cfg.eta2, cfg.q1, cfg.q2, a20, a21, a22, g, p0p)),
        sigma_u1y1=float(_sigma_u1y1(cfg.eta1, cfg.q1, cfg.q2, a11, a12, b1, b2, g, p0p)),
        sigma_u2y2=float(_sigma_u2y2(cfg.eta2, cfg.q1, cfg.q2, a20, a21, a22, b1, b2, g, p0p)),
        h1=float(_h1(cfg.eta1, cfg.q1, cfg.q2, a11, a12, b1, b2, g, p0p)),
        h2=float(_h2(cfg.eta2, cfg.q1, cfg.q2, a20, a21, a22, b1, b2, g, p0p)),
    )


# ---------------------------------------------------------------------------
# Rates
# ---------------------------------------------------------------------------

def _rates_from_arrays(eta1, eta2, p0, p1, p2, q1, q2,
                       a11, a12, a20, a21, a22, b1, b2, gamma):
    """Vectorized (f1, g1, f2, g2); degenerate parameters take analytic limits.

    A numerically constant auxiliary (s2_u <= EPS_VAR) conveys nothing, so
    both bounds collapse to treating everything unknown as noise:
    f = g = 0.5*log2(1 + p / s2_y_given_x).  An auxiliary with state content
    but no fresh helper power (numerator <= EPS_VAR) has an infinite binning
    penalty; its f is reported as 0, which is what min/clamping would produce.
    """
    p0p = _p0_prime(p0, q1, q2, b1, b2)
    out = []
    for k in (1, 2):
        if k == 1:
            eta, p, q, beta = eta1, p1, q1, b1
            s2u = _sigma2_u1(eta1, q1, q2, a11, a12, gamma, p0p)
            h = _h1(eta1, q1, q2, a11, a12, b1, b2, gamma, p0p)
            num = eta1 ** 2 * gamma * p0p
        else:
            eta, p, q, beta = eta2, p2, q2, b2
            s2u = _sigma2_u2(eta2, q1, q2, a20, a21, a22, gamma, p0p)
            h = _h2(eta2, q1, q2, a20, a21, a22, b1, b2, gamma, p0p)
            num = eta2 ** 2 * (1.0 - gamma) * p0p
        s2y = _sigma2_y(eta, p0, p, q, beta)
        s2yx = _sigma2_y_given_x(eta, p0, q, beta)
        const_aux = s2u <= EPS_VAR
        no_fresh = num <= EPS_VAR
        h_safe = np.where(const_aux, 1.0, h)
        with np.errstate(divide="ignore", invalid="ignore"):
            f_main = _half_log2(np.where(const_aux | no_fresh, 1.0, num * s2y / h_safe))
            g_main = _half_log2(1.0 + p * s2u / h_safe)
        limit = _half_log2(1.0 + p / s2yx)
        f = np.where(const_aux, limit, np.where(no_fresh, 0.0, f_main))
        g = np.where(const_aux, limit, g_main)
        out.extend((f, g))
    return tuple(out)


def _strategy_arrays(cfg: ChannelConfig, strat: HelperStrategy):
    return (cfg.eta1, cfg.eta2, cfg.p0, cfg.p1, cfg.p2, cfg.q1, cfg.q2,
            strat.alpha11, strat.alpha12, strat.alpha20, strat.alpha21,
            strat.alpha22, strat.beta1, strat.beta2, strat.gamma)


def _check_user(k: int) -> None:
    if k not in (1, 2):
        raise ConfigError("user index must be 1 or 2")


def rate_f(k: int, cfg: ChannelConfig, strat: HelperStrategy) -> float:
    """Dirty-paper/binning rate bound for user ``k``, in bits.

    ``f_1 = 0.5*log2(eta1^2*gamma*p0' * s2_y1 / h1)`` and, because user 2's
    auxiliary rides on the gamma_bar share of the helper power,
    ``f_2 = 0.5*log2(eta2^2*gamma_bar*p0' * s2_y2 / h2)``.  May be negative;
    degenerate parameters route to analytic limits rather than NaN.
    """
    _check_user(k)
    strat.validate_for(cfg)
    f1, g1, f2, g2 = _rates_from_arrays(*_strategy_arrays(cfg, strat))
    return float(f1 if k == 1 else f2)


def rate_g(k: int, cfg: ChannelConfig, strat: HelperStrategy) -> float:
    """Decoding rate bound I(X_k; Y_k | aux_k) for user ``k``, in bits."""
    _check_user(k)
    strat.validate_for(cfg)
    f1, g1, f2, g2 = _rates_from_arrays(*_strategy_arrays(cfg, strat))
    return float(g1 if k == 1 else g2)


# ---------------------------------------------------------------------------
# Distinguished coefficient choices
# ---------------------------------------------------------------------------

def _alpha_dpc1(eta1, p0p, b1, b2, gamma):
    den = eta1 ** 2 * p0p + 1.0
    a11 = (1.0 + eta1 * b1) * eta1 ** 2 * gamma * p0p / den
    a12 = b2 * eta1 ** 3 * gamma * p0p / den
    return a11, a12


def _alpha_dpc2(eta2, p0p, b1, b2, gamma):
    gbar = 1.0 - gamma
    den = eta2 ** 2 * gbar * p0p + 1.0
    a20 = eta2 ** 2 * gbar * p0p / den
    a21 = b1 * eta2 ** 3 * gbar * p0p / den
    a22 = (1.0 + eta2 * b2) * eta2 ** 2 * gbar * p0p / den
    return a20, a21, a22


def alpha_star_dpc(k: int, cfg: ChannelConfig, beta1: float, beta2: float,
                   gamma: float):
    """Dirty-paper-optimal coefficients; these maximize f_k.

    Returns ``(a11, a12)`` for user 1 and ``(a20, a21, a22)`` for user 2.
    """
    _check_user(k)
    p0p = float(_p0_prime(cfg.p0, cfg.q1, cfg.q2, beta1, beta2))
    if k == 1:
        a11, a12 = _alpha_dpc1(cfg.eta1, p0p, beta1, beta2, gamma)
        return float(a11), float(a12)
    a20, a21, a22 = _alpha_dpc2(cfg.eta2, p0p, beta1, beta2, gamma)
    return float(a20), float(a21), float(a22)


def alpha_star_cancel(k: int, cfg: ChannelConfig, beta1: float, beta2: float):
    """Coefficients that make the auxiliary absorb the full state seen at Y_k.

    With these the decoding bound simplifies to
    ``g_1 = 0.5*log2(1 + p1/(1 + eta1^2*gamma_bar*p0'))`` and
    ``g_2 = 0.5*log2(1 + p2)`` for every gamma.
    """
    _check_user(k)
    if k == 1:
        return 1.0 + cfg.eta1 * beta1, cfg.eta1 * beta2
    return 1.0, cfg.eta2 * beta1, 1.0 + cfg.eta2 * beta2


def star_strategy(cfg: ChannelConfig, beta1: float, beta2: float, gamma: float,
                  kind1: str = "dpc", kind2: str = "dpc") -> HelperStrategy:
    """Build a strategy using the distinguished coefficients per user.

    ``kind1``/``kind2`` select ``"dpc"`` or ``"cancel"`` coefficients for the
    respective auxiliary.
    """
    if kind1 == "dpc":
        a11, a12 = alpha_star_dpc(1, cfg, beta1, beta2, gamma)
    elif kind1 == "cancel":
        a11, a12 = alpha_star_cancel(1, cfg, beta1, beta2)
    else:
        raise ConfigError(f"unknown coefficient kind {kind1!r}")
    if kind2 == "dpc":
        a20, a21, a22 = alpha_star_dpc(2, cfg, beta1, beta2, gamma)
    elif kind2 == "cancel":
        a20, a21, a22 = alpha_star_cancel(2, cfg, beta1, beta2)
    else:
        raise ConfigError(f"unknown coefficient kind {kind2!r}")
    return HelperStrategy(a11, a12, a20, a21, a22, beta1, beta2, gamma)


def _reduced_f_arrays(k, eta1, eta2, p0, p1, p2, q1, q2, b1, b2, gamma):
    """Vectorized simplified f_k at the dirty-paper-optimal coefficients.

    The direct term uses 2*eta_k*beta_k*q_k, which equals the correlation
    form 2*eta_k*rho_k*sqrt(p0*q_k) whenever the beta/rho map is defined.
    """
    p0p = _p0_prime(p0, q1, q2, b1, b2)
    if k == 1:
        eta, p, q, beta = eta1, p1, q1, b1
        helper = eta1 ** 2 * gamma * p0p / (1.0 + eta1 ** 2 * (1.0 - gamma) * p0p)
    else:
        eta, p, q, beta = eta2, p2, q2, b2
        helper = eta2 ** 2 * (1.0 - gamma) * p0p
    den = eta ** 2 * p0 + 2.0 * eta * beta * q + q + 1.0
    return _half_log2(1.0 + p / den) + _half_log2(1.0 + helper)


def reduced_f(k: int, cfg: ChannelConfig, beta1: float, beta2: float,
              gamma: float) -> float:
    """Simplified closed form of ``rate_f`` at the dirty-paper coefficients.

    Agrees with ``rate_f(k, cfg, star_strategy(cfg, beta1, beta2, gamma))``
    wherever the latter is non-degenerate; at gamma = 1 (user 1) or gamma = 0
    (user 2) it also equals the non-trivial term of the converse rate bound
    at the matching correlation point.
    """
    _check_user(k)
    return float(_reduced_f_arrays(k, cfg.eta1, cfg.eta2, cfg.p0, cfg.p1,
                                   cfg.p2, cfg.q1, cfg.q2, beta1, beta2, gamma))


# ---------------------------------------------------------------------------
# Single-user helper-assisted rate (time-sharing building block)
# ---------------------------------------------------------------------------

def _pp_detail(cfg: ChannelConfig, beta_grid: int = 65, refine_iters: int = 160):
    """Best min(f1, g1) when the helper serves user 1 alone (gamma = 1).

    Seeds both distinguished coefficient choices on a beta1 grid, then
    polishes (beta1, a11, a12) with Nelder-Mead.  Returns (rate, strategy).
    """
    from scipy.optimize import minimize

    b1_cap = math.sqrt(cfg.p0 / cfg.q1) if cfg.q1 > 0.0 else 0.0

    def eval_point(b1, a11, a12):
        strat = HelperStrategy(a11, a12, 0.0, 0.0, 0.0, b1, 0.0, 1.0)
        f1, g1, _, _ = _rates_from_arrays(*_strategy_arrays(cfg, strat))
        return float(min(f1, g1)), strat

    candidates = []
    betas = np.linspace(-b1_cap, b1_cap, beta_grid) if b1_cap > 0.0 else np.array([0.0])
    for b1 in betas:
        p0p = float(_p0_prime(cfg.p0, cfg.q1, cfg.q2, b1, 0.0))
        for a11, a12 in (_alpha_dpc1(cfg.eta1, p0p, b1, 0.0, 1.0),
                         (1.0 + cfg.eta1 * b1, 0.0)):
            candidates.append((eval_point(b1, a11, a12)[0], float(b1), a11, a12))
    candidates.sort(key=lambda c: -c[0])
    best_val, best_b1, best_a11, best_a12 = candidates[0]

    def objective(x):
        b1 = float(np.clip(x[0], -b1_cap, b1_cap)) if b1_cap > 0.0 else 0.0
        return -eval_point(b1, float(x[1]), float(x[2]))[0]

    for _, b1, a11, a12 in candidates[:3]:
        res = minimize(objective, np.array([b1, a11, a12]), method="Nelder-Mead",
                       options={"maxiter": refine_iters, "xatol": 1e-10,
                                "fatol": 1e-13})
        if -res.fun > best_val:
            best_val = -res.fun
            best_b1 = float(np.clip(res.x[0], -b1_cap, b1_cap)) if b1_cap > 0.0 else 0.0
            best_a11, best_a12 = float(res.x[1]), float(res.x[2])
    rate, strat = eval_point(best_b1, best_a11, best_a12)
    return max(0.0, rate), strat


def pp_helper_rate(k: int, cfg: ChannelConfig, budget: int = 65) -> float:
    """Single-user helper-assisted rate for user ``k`` in bits.

    The helper devotes its whole dirty-paper share to user ``k`` (gamma = 1
    for user 1, gamma = 0 for user 2) and only cancels that user's state;
    the rate is max over (beta_k, coefficients) of min(f_k, g_k).  This is
    the per-slot rate of the alternating time-sharing baseline.
    """
    _check_user(k)
    cfg_k = cfg if k == 1 else _swap_users(cfg)
    rate, _ = _pp_detail(cfg_k, beta_grid=budget)
    return rate


def _pp_strategy(k: int, cfg: ChannelConfig, budget: int = 65):
    """(rate, HelperStrategy) achieving :func:`pp_helper_rate` for user ``k``."""
    if k == 1:
        return _pp_detail(cfg, beta_grid=budget)
    rate, s = _pp_detail(_swap_users(cfg), beta_grid=budget)
    # Mirror the user-1 solution back: gamma = 0 puts the helper power in the
    # second dirty-paper component, whose auxiliary is V with alpha20 unused.
    mirrored = HelperStrategy(0.0, 0.0, 0.0, s.alpha12, s.alpha11,
                              0.0, s.beta1, 0.0)
    return rate, mirrored


def _swap_users(cfg: ChannelConfig) -> ChannelConfig:
    return ChannelConfig(cfg.eta2, cfg.eta1, cfg.p0, cfg.p2, cfg.p1,
                         cfg.q2, cfg.q1)
