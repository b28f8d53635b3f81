"""Per-series estimators of the characteristic noise parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFitError, DegenerateInputError, InvalidInputError, NoConvergenceError
from .noise_models.shot import pulse_integrals
from .noise_models.specs import PulseShape

EULER_GAMMA = 0.5772156649015329


# --- Hurst index ---------------------------------------------------------------


def _second_order_variation(path: np.ndarray, m: int) -> float:
    incr = path[2 * m :] - 2.0 * path[m:-m] + path[: -2 * m]
    return float(np.mean(incr * incr))


def hurst_discrete_variations(x, kind: str = "fbm") -> float:
    """Hurst index from second-order discrete variations at dilations 1 and 2.

    For ``kind="fgn"`` the series is first integrated into a path. Returns
    ``0.5 * log2(V(2) / V(1))``, which is exact on expectations for FBM.
    """
    x = np.asarray(x, dtype=float)
    if len(x) < 16:
        raise InvalidInputError("need at least 16 samples")
    if kind == "fgn":
        path = np.cumsum(x)
    elif kind == "fbm":
        path = x
    else:
        raise InvalidInputError(f"kind must be 'fgn' or 'fbm', got {kind!r}")
    v1 = _second_order_variation(path, 1)
    if v1 <= 0:
        raise DegenerateInputError("second-order variation is zero (affine or constant input)")
    v2 = _second_order_variation(path, 2)
    return 0.5 * math.log2(v2 / v1)


# --- fractional difference parameter ---------------------------------------------


def _golden_section(fun, lo, hi, tol):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def whittle_objective(d: float, freqs: np.ndarray, pgram: np.ndarray) -> float:
    """Whittle contrast for FDWN with the innovation variance profiled out."""
    log_g = -2.0 * d * np.log(2.0 * np.sin(np.pi * freqs))
    return float(np.log(np.mean(pgram * np.exp(-log_g))) + np.mean(log_g))


def fdwn_d_whittle(x, bounds=(-0.49, 0.49), tol: float = 1e-4) -> float:
    """Fractional difference parameter by Whittle likelihood over Fourier frequencies."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 128:
        raise InvalidInputError("need at least 128 samples")
    j = np.arange(1, (n - 1) // 2 + 1)
    spec = np.fft.rfft(x)[j]
    pgram = (spec.real**2 + spec.imag**2) / n
    if not np.any(pgram > 0):
        raise DegenerateInputError("periodogram vanishes at all nonzero Fourier frequencies")
    freqs = j / n
    d = _golden_section(lambda v: whittle_objective(v, freqs, pgram), bounds[0], bounds[1], tol)
    if d - bounds[0] < tol or bounds[1] - d < tol:
        raise NoConvergenceError(f"Whittle optimum at the search bound (d = {d:.4f})")
    return d


# --- shot noise event rate -------------------------------------------------------


def event_rate_from_moments(mean: float, var: float, pulse: PulseShape, sigma_d: float) -> float:
    """nu = 2 mean^2 I2 / (var I1^2), valid for exponential pulse amplitudes."""
    if not var > 0:
        raise DegenerateInputError("variance must be positive")
    i1, i2 = pulse_integrals(pulse, sigma_d)
    return 2.0 * mean * mean * i2 / (var * i1 * i1)


def shot_event_rate(x, pulse: PulseShape, sigma_d: float = 1.0) -> float:
    x = np.asarray(x, dtype=float)
    return event_rate_from_moments(float(np.mean(x)), float(np.var(x, ddof=1)), pulse, sigma_d)


# --- Bernoulli-Gaussian mixture ----------------------------------------------------


@dataclass
class BgFit:
    p_hat: float
    sigma_w_hat: float
    sigma_i_hat: float
    theta_hat: float
    loglik: float
    iters: int
    converged: bool = True
    loglik_trace: list = field(default_factory=list, repr=False)


# 0.999 quantile of chi-square with 2 degrees of freedom
_LR_THRESHOLD = -2.0 * math.log(1e-3)


def _mixture_loglik(x2, w, v):
    # per-sample log densities of the two zero-mean components, shape (2, n)
    logd = np.log(w)[:, None] - 0.5 * (np.log(2.0 * np.pi * v)[:, None] + x2[None, :] / v[:, None])
    top = logd.max(axis=0)
    total = top + np.log(np.exp(logd[0] - top) + np.exp(logd[1] - top))
    return logd, total


def bg_fit_em(x, tol: float = 1e-6, max_iter: int = 500) -> BgFit:
    """Two-component zero-mean Gaussian mixture fitted by expectation maximization.

    Convergence is declared when the mean per-sample log-likelihood improves
    by less than ``tol``. The impulse probability is the weight of the
    larger-variance component.
    """
    x = np.asarray(x, dtype=float)
    if len(x) < 256:
        raise InvalidInputError("need at least 256 samples")
    x2 = x * x
    s2 = float(np.mean(x2))
    if s2 <= 0:
        raise DegenerateInputError("all-zero series")
    w = np.array([0.5, 0.5])
    v = np.array([0.1 * s2, 10.0 * s2])
    floor = 1e-12 * s2
    trace = []
    prev = -np.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        logd, total = _mixture_loglik(x2, w, v)
        ll = float(np.mean(total))
        trace.append(ll)
        if ll - prev < tol:
            converged = True
            break
        prev = ll
        resp = np.exp(logd - total[None, :])
        nk = resp.sum(axis=1)
        if np.any(nk <= 0):
            raise DegenerateFitError("a mixture component lost all responsibility")
        w = nk / len(x)
        v = (resp @ x2) / nk
        if np.any(v < floor):
            raise DegenerateFitError("mixture component variance collapsed")
    else:
        logd, total = _mixture_loglik(x2, w, v)
        trace.append(float(np.mean(total)))
    # likelihood-ratio check against a single zero-mean Gaussian (2 extra parameters)
    single = -0.5 * len(x) * (math.log(2.0 * math.pi * s2) + 1.0)
    if 2.0 * (trace[-1] * len(x) - single) < _LR_THRESHOLD:
        raise DegenerateFitError("mixture is indistinguishable from a single Gaussian")
    big = int(np.argmax(v))
    small = 1 - big
    return BgFit(
        p_hat=float(w[big]),
        sigma_w_hat=math.sqrt(v[small]),
        sigma_i_hat=math.sqrt(max(v[big] - v[small], 0.0)),
        theta_hat=math.sqrt(v[big] / v[small]),
        loglik=trace[-1] * len(x),
        iters=it,
        converged=converged,
        loglik_trace=trace,
    )


# --- symmetric alpha-stable ---------------------------------------------------------


@dataclass
class SasFit:
    alpha_hat: float
    gamma_hat: float
    clamped: bool = False


def sas_params_from_log_moments(mean_log: float, var_log: float) -> SasFit:
    """Invert E ln|X| and Var ln|X| of a centered SaS law for (alpha, gamma).

    Var ln|X| = pi^2/6 * (1/alpha^2 + 1/2) and
    E ln|X| = C_e * (1/alpha - 1) + ln(gamma) / alpha.
    """
    clamped = False
    excess = 6.0 * var_log / math.pi**2 - 0.5
    if excess < 0.25:
        alpha, clamped = 2.0, True
    else:
        alpha = excess**-0.5
        if alpha < 0.05:
            alpha, clamped = 0.05, True
    gamma = math.exp(alpha * mean_log + EULER_GAMMA * (alpha - 1.0))
    return SasFit(alpha_hat=alpha, gamma_hat=gamma, clamped=clamped)


def sas_fit_logmoments(x) -> SasFit:
    """SaS characteristic exponent and scale from the moments of ln|x|."""
    x = np.asarray(x, dtype=float)
    nonzero = x != 0
    if np.count_nonzero(~nonzero) > 0.01 * len(x):
        raise InvalidInputError("more than 1% of samples are exactly zero")
    y = np.log(np.abs(x[nonzero]))
    if len(y) < 2:
        raise InvalidInputError("need at least two nonzero samples")
    return sas_params_from_log_moments(float(np.mean(y)), float(np.var(y, ddof=1)))
