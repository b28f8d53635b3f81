"""Band-limited thermal noise: Butterworth bandpass design and zero-phase filtering."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import signal

from ..errors import InvalidInputError, InvalidParameterError, NumericalDesignError
from ..variates import RngStream
from .specs import BandLimited


@dataclass(frozen=True)
class SosCascade:
    """Cascade of biquads.

    ``sections`` has one row ``(b0, b1, b2, a1, a2)`` per biquad with
    ``a0 = 1``; the overall gain is held separately in ``gain``.
    """

    sections: np.ndarray
    gain: float

    @property
    def order(self) -> int:
        return 2 * len(self.sections)

    def poles(self) -> np.ndarray:
        return np.concatenate([np.roots([1.0, a1, a2]) for a1, a2 in self.sections[:, 3:]])

    def as_sos(self) -> np.ndarray:
        """scipy-style ``(n, 6)`` array with the gain spread evenly over sections."""
        n = len(self.sections)
        g = abs(self.gain) ** (1.0 / n)
        sos = np.empty((n, 6))
        sos[:, :3] = self.sections[:, :3] * g
        sos[0, :3] *= np.sign(self.gain)
        sos[:, 3] = 1.0
        sos[:, 4:] = self.sections[:, 3:]
        return sos

    def response(self, f) -> np.ndarray:
        """Complex frequency response at digital frequencies ``f`` (cycles/sample)."""
        z1 = np.exp(-2j * np.pi * np.asarray(f, dtype=float))
        z2 = z1 * z1
        h = np.full(z1.shape, self.gain, dtype=complex)
        for b0, b1, b2, a1, a2 in self.sections:
            h *= (b0 + b1 * z1 + b2 * z2) / (1.0 + a1 * z1 + a2 * z2)
        return h


def butterworth_bandpass(order: int, f_lo: float, f_hi: float) -> SosCascade:
    """Digital Butterworth bandpass of final order ``order``.

    Analog prototype of order ``order/2``, lowpass to bandpass transform,
    then the bilinear transform with prewarped band edges. Each section
    carries one conjugate pole pair and the zero pair at z = +1, -1.
    """
    if not 0 < f_lo < f_hi < 0.5:
        raise InvalidParameterError(f"need 0 < f_lo < f_hi < 0.5, got ({f_lo}, {f_hi})")
    if order <= 0 or order % 2:
        raise InvalidParameterError(f"bandpass order must be a positive even integer, got {order}")
    n = order // 2

    # prototype poles on the left half of the unit circle
    k = np.arange(n)
    proto = np.exp(1j * np.pi * (2 * k + n + 1) / (2 * n))

    # prewarped edges for the bilinear map s = 2 (z - 1) / (z + 1)
    w1 = 2.0 * np.tan(np.pi * f_lo)
    w2 = 2.0 * np.tan(np.pi * f_hi)
    bw = w2 - w1
    w0sq = w1 * w2

    half = proto * bw / 2.0
    root = np.sqrt(half * half - w0sq)
    poles_s = np.concatenate([half + root, half - root])
    gain_s = bw**n  # analog zeros: n at s = 0, n at infinity

    poles_z = (2.0 + poles_s) / (2.0 - poles_s)
    gain_z = np.real(gain_s * 2.0**n / np.prod(2.0 - poles_s))

    upper = poles_z[poles_z.imag > 0]
    if len(upper) != n:
        raise NumericalDesignError("bandpass poles did not split into conjugate pairs")
    # least resonant sections first
    upper = upper[np.argsort(np.abs(upper))]
    if np.any(np.abs(upper) >= 1.0):
        raise NumericalDesignError("designed filter is unstable (pole on or outside the unit circle)")

    sections = np.zeros((n, 5))
    sections[:, 0] = 1.0
    sections[:, 2] = -1.0
    sections[:, 3] = -2.0 * upper.real
    sections[:, 4] = np.abs(upper) ** 2
    return SosCascade(sections=sections, gain=float(gain_z))


@lru_cache(maxsize=32)
def _design(order: int, f_lo: float, f_hi: float) -> SosCascade:
    return butterworth_bandpass(order, f_lo, f_hi)


def zero_phase_filter(sos: SosCascade, x) -> np.ndarray:
    """Forward-backward filtering with odd-reflection padding of ``3 * order`` samples."""
    x = np.asarray(x, dtype=float)
    padlen = 3 * sos.order
    if x.shape[-1] <= padlen:
        raise InvalidInputError(f"series of length {x.shape[-1]} too short for padding of {padlen}")
    return signal.sosfiltfilt(sos.as_sos(), x, axis=-1, padtype="odd", padlen=padlen)


def simulate_bandlimited(spec: BandLimited, L: int, s: RngStream) -> np.ndarray:
    white = s.std_normal(L)
    return zero_phase_filter(_design(spec.order, spec.f_lo, spec.f_hi), white)


def default_bands(n_bands: int = 8, width: float = 0.05, first_lo: float = 0.025):
    """Passband edges of the built-in band-limited cases."""
    return [(round(first_lo + width * i, 10), round(first_lo + width * (i + 1), 10)) for i in range(n_bands)]
