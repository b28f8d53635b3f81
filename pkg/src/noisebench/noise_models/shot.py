"""Shot noise as a filtered Poisson process with exponentially distributed amplitudes."""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import lfilter

from ..errors import InvalidParameterError
from ..variates import RngStream
from .specs import PulseShape, Shot

_SQRT2PI = math.sqrt(2.0 * math.pi)

# pulse support cut where p(t) drops below 1e-12 of its peak, in units of sigma_d
_SUPPORT = {
    PulseShape.ONE_SIDED_EXPONENTIAL: (0.0, 12.0 * math.log(10.0)),
    PulseShape.LINEAR_EXPONENTIAL: (0.0, 33.0),
    PulseShape.GAUSSIAN: (-math.sqrt(24.0 * math.log(10.0)), math.sqrt(24.0 * math.log(10.0))),
}


def pulse_value(shape: PulseShape, sigma_d: float, t):
    """Pulse function p(t), each shape normalized to unit area."""
    shape = PulseShape(shape)
    t = np.asarray(t, dtype=float)
    if shape is PulseShape.GAUSSIAN:
        return np.exp(-0.5 * (t / sigma_d) ** 2) / (sigma_d * _SQRT2PI)
    tc = np.where(t >= 0, t, 0.0)
    if shape is PulseShape.ONE_SIDED_EXPONENTIAL:
        val = np.exp(-tc / sigma_d) / sigma_d
    else:
        val = tc / sigma_d**2 * np.exp(-tc / sigma_d)
    return np.where(t >= 0, val, 0.0)


def pulse_integrals(shape: PulseShape, sigma_d: float) -> tuple[float, float]:
    """Closed-form ``(I1, I2)``: the integrals of p(t) and p(t)**2."""
    if not sigma_d > 0:
        raise InvalidParameterError("sigma_d must be positive")
    shape = PulseShape(shape)
    if shape is PulseShape.ONE_SIDED_EXPONENTIAL:
        return 1.0, 1.0 / (2.0 * sigma_d)
    if shape is PulseShape.LINEAR_EXPONENTIAL:
        return 1.0, 1.0 / (4.0 * sigma_d)
    return 1.0, 1.0 / (2.0 * sigma_d * math.sqrt(math.pi))


def shot_direct_sum(times, amplitudes, shape: PulseShape, sigma_d: float, dt: float, n_grid: int) -> np.ndarray:
    """x[m] = sum_n A_n p(m*dt - tau_n) on m = 0..n_grid-1, by explicit summation over
    each event's (truncated) pulse support."""
    shape = PulseShape(shape)
    times = np.asarray(times, dtype=float)
    amplitudes = np.asarray(amplitudes, dtype=float)
    lo, hi = _SUPPORT[shape]
    j0 = int(math.floor(lo * sigma_d / dt)) - 1
    j1 = int(math.ceil(hi * sigma_d / dt)) + 1
    base = np.floor(times / dt).astype(np.int64)
    idx = base[:, None] + np.arange(j0, j1 + 1)[None, :]
    vals = amplitudes[:, None] * pulse_value(shape, sigma_d, idx * dt - times[:, None])
    keep = (idx >= 0) & (idx < n_grid)
    return np.bincount(idx[keep], weights=vals[keep], minlength=n_grid)


def _recursive_sum(k, delta, amplitudes, shape, sigma_d, dt, n_grid):
    """Exact evaluation for the causal exponential pulses.

    An event at ``tau = k*dt - delta`` (0 <= delta < dt) first reaches the grid
    at index ``k``; from there its contribution decays geometrically, so the
    whole superposition is a first or second order recursive filter driven by
    per-event injections.
    """
    r = math.exp(-dt / sigma_d)
    c = amplitudes * np.exp(-delta / sigma_d)
    if shape is PulseShape.ONE_SIDED_EXPONENTIAL:
        w = np.bincount(k, weights=c / sigma_d, minlength=n_grid)
        return lfilter([1.0], [1.0, -r], w)
    c = c / sigma_d**2
    a = np.bincount(k, weights=c * delta, minlength=n_grid)
    b = np.bincount(k, weights=c * dt, minlength=n_grid)
    # sum_j (delta + j*dt) r^j  ->  1/(1 - r z^-1) on a,  r z^-1/(1 - r z^-1)^2 on b
    return lfilter([1.0], [1.0, -r], a) + lfilter([0.0, r], [1.0, -2.0 * r, r * r], b)


def simulate_shot(spec: Shot, L: int, s: RngStream, on_grid: bool = False) -> np.ndarray:
    """Steady-state shot noise sampled at ``t_m = m*dt``.

    A process of ``2L`` samples spanning ``T = (2L-1)*dt`` is built from
    ``N ~ Poisson(nu*T)`` events with exponential(beta) amplitudes, and the first
    ``L`` samples are discarded as transient. Event times are uniform on
    ``[0, T]``; with ``on_grid=True`` they are restricted to grid points, which
    biases the sampled moments of discontinuous pulses by O(dt/sigma_d).
    """
    n_grid = 2 * L
    T = (n_grid - 1) * spec.dt
    if T < 100.0 * spec.sigma_d:
        raise InvalidParameterError(
            f"duration {T:g} is too short for pulse width {spec.sigma_d:g} (need >= 100 * sigma_d)"
        )
    n = int(s.poisson(spec.nu * T))
    if on_grid:
        k = s.generator.integers(0, n_grid, n)
        delta = np.zeros(n)
    else:
        u = (n_grid - 1) * s.uniform(n)
        k = np.ceil(u).astype(np.int64)
        delta = (k - u) * spec.dt
    amps = s.exponential(spec.beta, n)
    if spec.pulse is PulseShape.GAUSSIAN:
        x = shot_direct_sum(k * spec.dt - delta, amps, spec.pulse, spec.sigma_d, spec.dt, n_grid)
    else:
        x = _recursive_sum(k, delta, amps, spec.pulse, spec.sigma_d, spec.dt, n_grid)
    return x[L:]
