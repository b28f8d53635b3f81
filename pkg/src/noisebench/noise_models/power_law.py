"""Power law noise: fractional Gaussian noise, fractional Brownian motion and
fractionally differenced white noise."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import gammaln

from ..errors import EmbeddingError, InvalidParameterError
from ..variates import RngStream
from .specs import Fbm, Fdwn, Fgn


def fgn_autocovariance(H: float, sigma_y2: float, k):
    """Autocovariance of fractional Gaussian noise at (integer) lag ``k``."""
    if not 0 < H < 1:
        raise InvalidParameterError(f"H must lie in (0, 1), got {H}")
    k = np.abs(np.asarray(k, dtype=float))
    h2 = 2.0 * H
    return 0.5 * sigma_y2 * (np.abs(k - 1.0) ** h2 + (k + 1.0) ** h2 - 2.0 * k**h2)


def fdwn_autocovariance(d: float, sigma_eps2: float, k):
    """Autocovariance of fractionally differenced white noise at lag(s) ``k``.

    gamma(0) = s2 * Gamma(1 - 2d) / Gamma(1 - d)^2 and
    gamma(k) = gamma(k - 1) * (k - 1 + d) / (k - d).
    """
    if not -0.5 < d < 0.5:
        raise InvalidParameterError(f"d must lie in (-0.5, 0.5), got {d}")
    k_arr = np.abs(np.asarray(k, dtype=int))
    kmax = int(k_arr.max(initial=0))
    acvf = _fdwn_acvf(d, sigma_eps2, kmax + 1)
    out = acvf[k_arr]
    return float(out) if out.ndim == 0 else out


def _fdwn_acvf(d: float, sigma_eps2: float, n: int) -> np.ndarray:
    g0 = sigma_eps2 * np.exp(gammaln(1.0 - 2.0 * d) - 2.0 * gammaln(1.0 - d))
    j = np.arange(1, n, dtype=float)
    return g0 * np.concatenate([[1.0], np.cumprod((j - 1.0 + d) / (j - d))])


def circulant_eigenvalues(acvf: np.ndarray, size: int) -> np.ndarray:
    """Eigenvalues of the minimal symmetric circulant of length ``size`` whose
    first row starts with ``acvf``."""
    half = size // 2
    if len(acvf) < half + 1:
        raise InvalidParameterError("autocovariance too short for the requested embedding")
    row = np.empty(size)
    row[: half + 1] = acvf[: half + 1]
    row[half + 1 :] = acvf[1:half][::-1]
    lam = np.fft.fft(row).real
    if lam.min() < -1e-8 * lam.max():
        raise EmbeddingError(f"circulant embedding is not nonnegative definite (min eigenvalue {lam.min():.3e})")
    return np.maximum(lam, 0.0)


def _embedding_size(L: int) -> int:
    return 1 << int(np.ceil(np.log2(2 * max(L, 2))))


@lru_cache(maxsize=16)
def _fgn_sqrt_eigs(H: float, sigma_y2: float, L: int) -> np.ndarray:
    size = _embedding_size(L)
    acvf = fgn_autocovariance(H, sigma_y2, np.arange(size // 2 + 1))
    lam = circulant_eigenvalues(acvf, size)
    return np.sqrt(lam / size)


def gaussian_from_eigenvalues(sqrt_eigs: np.ndarray, L: int, s: RngStream) -> np.ndarray:
    size = len(sqrt_eigs)
    z = s.std_normal(2 * size)
    w = np.fft.fft(sqrt_eigs * (z[:size] + 1j * z[size:]))
    return w.real[:L]


def simulate_fgn(spec: Fgn, L: int, s: RngStream) -> np.ndarray:
    """Exact FGN sample of length ``L`` by circulant embedding."""
    return gaussian_from_eigenvalues(_fgn_sqrt_eigs(spec.H, spec.sigma_y2, L), L, s)


def simulate_fbm(spec: Fbm, L: int, s: RngStream) -> np.ndarray:
    """FBM path on 0..L-1 as the cumulative sum of an FGN sample, starting at 0."""
    if L < 2:
        return np.zeros(L)
    y = simulate_fgn(Fgn(spec.H, spec.sigma_y2), L - 1, s)
    return np.concatenate([[0.0], np.cumsum(y)])


def durbin_levinson(acvf: np.ndarray):
    """Durbin-Levinson recursion.

    Returns ``(phi, v)`` where ``phi[n, :n]`` holds the one-step prediction
    coefficients for ``x[n]`` in chronological order (applied to
    ``x[0], ..., x[n-1]``) and ``v[n]`` the prediction error variances.
    """
    acvf = np.asarray(acvf, dtype=float)
    n = len(acvf)
    phi = np.zeros((n, n))
    v = np.empty(n)
    v[0] = acvf[0]
    prev = np.zeros(0)  # phi_{m,1..m}, lag order
    for m in range(1, n):
        kappa = (acvf[m] - prev @ acvf[m - 1 : 0 : -1]) / v[m - 1] if m > 1 else acvf[1] / acvf[0]
        cur = np.empty(m)
        cur[: m - 1] = prev - kappa * prev[::-1]
        cur[m - 1] = kappa
        v[m] = v[m - 1] * (1.0 - kappa * kappa)
        phi[m, :m] = cur[::-1]
        prev = cur
    return phi, v


@lru_cache(maxsize=2)
def _fdwn_factor(d: float, sigma_eps2: float, L: int):
    phi, v = durbin_levinson(_fdwn_acvf(d, sigma_eps2, L))
    # x[n] - sum_j phi[n, j] x[j] = sqrt(v[n]) e[n]  <=>  (I - phi) x = sqrt(v) e
    phi *= -1.0
    phi[np.diag_indices(L)] = 1.0
    return phi, np.sqrt(v)


def simulate_fdwn_batch(spec: Fdwn, L: int, noise: np.ndarray) -> np.ndarray:
    """FDWN samples from standard normal innovations ``noise`` of shape ``(n, L)``.

    Solves the unit lower-triangular innovations system produced by the
    Durbin-Levinson recursion, so each row is an exact stationary sample.
    """
    a, sd = _fdwn_factor(float(spec.d), float(spec.sigma_eps2), L)
    rhs = (np.atleast_2d(noise) * sd).T
    return solve_triangular(a, rhs, lower=True, unit_diagonal=True, check_finite=False).T


def simulate_fdwn(spec: Fdwn, L: int, s: RngStream) -> np.ndarray:
    return simulate_fdwn_batch(spec, L, s.std_normal(L)[None, :])[0]


def psd_exponent(spec) -> float | None:
    """Low-frequency PSD exponent eta with S(f) ~ |f|^eta, or None for other models."""
    if isinstance(spec, Fdwn):
        return -2.0 * spec.d
    if isinstance(spec, Fgn):
        return 1.0 - 2.0 * spec.H
    if isinstance(spec, Fbm):
        return -(2.0 * spec.H + 1.0)
    return None
