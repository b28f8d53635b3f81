"""Seeded random variates.

Each time series in a dataset draws from its own stream, derived from a
master seed and the series index, so datasets can be generated in any
order (or in parallel) and still come out bit-identical.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParameterError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """64-bit avalanche finalizer (SplitMix64)."""
    x = (x + _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class RngStream:
    """A reproducible PCG64 stream keyed by ``(master_seed, stream_index)``.

    A stream is a mutable value: do not share one between concurrent tasks.
    """

    def __init__(self, master_seed: int, stream_index: int = 0):
        if not (0 <= master_seed <= _MASK64 and 0 <= stream_index <= _MASK64):
            raise InvalidParameterError("seed and stream index must be unsigned 64-bit integers")
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        key = splitmix64(self.master_seed ^ splitmix64(self.stream_index))
        # second word keeps the full 128-bit PCG state populated
        key2 = splitmix64(key ^ splitmix64(self.stream_index ^ _GOLDEN))
        self.generator = np.random.Generator(np.random.PCG64([key, key2]))

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index})"

    def uniform(self, size=None):
        """Uniform on [0, 1)."""
        return self.generator.random(size)

    def std_normal(self, size=None):
        return std_normal(self, size)

    def exponential(self, beta=1.0, size=None):
        return exponential(self, beta, size)

    def poisson(self, lam, size=None):
        return poisson(self, lam, size)

    def sas_standard(self, alpha, size=None):
        return sas_standard(self, alpha, size)


def derive_stream(master_seed: int, stream_index: int) -> RngStream:
    return RngStream(master_seed, stream_index)


def std_normal(s: RngStream, size=None):
    # numpy's ziggurat sampler is exact, not a summation approximation
    return s.generator.standard_normal(size)


def exponential(s: RngStream, beta: float = 1.0, size=None):
    """Exponential variates with mean ``beta`` by inversion."""
    if not beta > 0:
        raise InvalidParameterError(f"exponential mean must be positive, got {beta}")
    u = s.generator.random(size)
    return -beta * np.log1p(-u)


def poisson(s: RngStream, lam: float, size=None):
    """Exact Poisson variates.

    numpy uses inversion for ``lam < 10`` and Hörmann's PTRS transformed
    rejection otherwise; both are exact.
    """
    if not lam >= 0:
        raise InvalidParameterError(f"Poisson mean must be nonnegative, got {lam}")
    return s.generator.poisson(lam, size)


def sas_standard(s: RngStream, alpha: float, size=None):
    """Standard symmetric alpha-stable variates, characteristic function exp(-|u|^alpha).

    Chambers-Mallows-Stuck transform of a uniform angle and a unit
    exponential. The Cauchy case is branched out because the general
    expression is unstable near ``alpha = 1``.
    """
    if not 0 < alpha <= 2:
        raise InvalidParameterError(f"alpha must lie in (0, 2], got {alpha}")
    phi = math.pi * (s.generator.random(size) - 0.5)
    w = exponential(s, 1.0, size)
    if abs(alpha - 1.0) < 1e-12:
        return np.tan(phi)
    return (
        np.sin(alpha * phi)
        / np.cos(phi) ** (1.0 / alpha)
        * (np.cos((1.0 - alpha) * phi) / w) ** ((1.0 - alpha) / alpha)
    )
