"""Preprocessing used when training generative models on the target datasets:
min-max feature scaling, a quantile-to-normal map and the STFT pair."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import InvalidInputError, InvalidParameterError


def normal_inverse_cdf(p):
    """Inverse standard normal CDF for ``p`` in (0, 1)."""
    p_arr = np.asarray(p, dtype=float)
    if np.any(~((p_arr > 0) & (p_arr < 1))):
        raise InvalidParameterError("probabilities must lie strictly inside (0, 1)")
    out = ndtri(p_arr)
    return float(out) if out.ndim == 0 else out


def normal_cdf(x):
    return ndtr(x)


# --- min-max scaling --------------------------------------------------------------


@dataclass(frozen=True)
class MinMaxScaler:
    """Per-feature affine map onto [-1, 1]; features are all axes but the first."""

    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def fit(cls, data) -> "MinMaxScaler":
        data = np.asarray(data, dtype=float)
        if data.shape[0] == 0:
            raise InvalidInputError("cannot fit a scaler on empty data")
        return cls(lo=data.min(axis=0), hi=data.max(axis=0))

    def _span(self):
        span = self.hi - self.lo
        return span, span > 0

    def apply(self, data) -> np.ndarray:
        span, ok = self._span()
        scaled = 2.0 * (np.asarray(data, dtype=float) - self.lo) / np.where(ok, span, 1.0) - 1.0
        return np.where(ok, scaled, 0.0)

    def invert(self, scaled) -> np.ndarray:
        span, ok = self._span()
        return np.where(ok, (np.asarray(scaled, dtype=float) + 1.0) * 0.5 * span + self.lo, self.lo)


def minmax_fit(data) -> MinMaxScaler:
    return MinMaxScaler.fit(data)


def minmax_apply(scaler: MinMaxScaler, data) -> np.ndarray:
    return scaler.apply(data)


def minmax_invert(scaler: MinMaxScaler, scaled) -> np.ndarray:
    return scaler.invert(scaled)


# --- quantile transformation -------------------------------------------------------


@dataclass(frozen=True)
class QuantileMap:
    """Monotone map from fitted empirical quantiles onto standard normal quantiles.

    ``quantiles`` has shape ``(channels, n_quantiles)``; the probability grid is
    the midpoint grid ``(j + 1/2) / n_quantiles``.
    """

    quantiles: np.ndarray
    channel_axis: int | None = None

    @property
    def n_quantiles(self) -> int:
        return self.quantiles.shape[1]

    @property
    def probs(self) -> np.ndarray:
        return (np.arange(self.n_quantiles) + 0.5) / self.n_quantiles

    @property
    def references(self) -> np.ndarray:
        return ndtri(self.probs)

    def _channels(self, x):
        x = np.asarray(x, dtype=float)
        if self.channel_axis is None:
            return x, [(slice(None), self.quantiles[0])]
        ax = self.channel_axis % x.ndim
        if x.shape[ax] != len(self.quantiles):
            raise InvalidInputError(f"expected {len(self.quantiles)} channels on axis {ax}, got {x.shape[ax]}")
        sl = [slice(None)] * x.ndim
        out = []
        for c, q in enumerate(self.quantiles):
            idx = list(sl)
            idx[ax] = c
            out.append((tuple(idx), q))
        return x, out

    def apply(self, x) -> np.ndarray:
        x, chans = self._channels(x)
        y = np.empty_like(x)
        probs = self.probs
        for idx, q in chans:
            v = np.clip(x[idx], q[0], q[-1])
            # average of forward and reversed interpolation resolves tied quantiles symmetrically
            u = 0.5 * (np.interp(v, q, probs) - np.interp(-v, -q[::-1], -probs[::-1]))
            y[idx] = ndtri(u)
        return y

    def invert(self, y) -> np.ndarray:
        y, chans = self._channels(y)
        x = np.empty_like(y)
        probs = self.probs
        for idx, q in chans:
            u = np.clip(ndtr(y[idx]), probs[0], probs[-1])
            x[idx] = np.interp(u, probs, q)
        return x

    def to_dict(self) -> dict:
        return {
            "n_quantiles": self.n_quantiles,
            "channel_axis": self.channel_axis,
            "probabilities": "midpoint",
            "quantiles": self.quantiles.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuantileMap":
        q = np.asarray(data["quantiles"], dtype=float)
        if q.ndim != 2 or q.shape[1] != data["n_quantiles"]:
            raise InvalidInputError("quantile table does not match n_quantiles")
        return cls(quantiles=q, channel_axis=data.get("channel_axis"))


def quantile_fit(data, n_quantiles: int = 1024, channel_axis: int | None = None) -> QuantileMap:
    """Fit empirical quantiles at the midpoint probabilities, pooling every sample
    of a channel. ``channel_axis=None`` treats all values as one channel."""
    data = np.asarray(data, dtype=float)
    probs = (np.arange(n_quantiles) + 0.5) / n_quantiles
    if channel_axis is None:
        pools = [data.ravel()]
    else:
        pools = list(np.moveaxis(data, channel_axis, 0).reshape(data.shape[channel_axis], -1))
    for pool in pools:
        if pool.size < n_quantiles:
            raise InvalidInputError(f"need at least {n_quantiles} samples per channel, got {pool.size}")
    quantiles = np.stack([np.quantile(pool, probs) for pool in pools])
    return QuantileMap(quantiles=quantiles, channel_axis=channel_axis)


def quantile_apply(m: QuantileMap, x) -> np.ndarray:
    return m.apply(x)


def quantile_invert(m: QuantileMap, y) -> np.ndarray:
    return m.invert(y)


# --- short-time Fourier transform --------------------------------------------------------


def hann(n: int) -> np.ndarray:
    """Periodic Hann window."""
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def is_cola(window: np.ndarray, hop: int, tol: float = 1e-10) -> bool:
    """Whether shifted copies of ``window`` at stride ``hop`` sum to a constant."""
    n = len(window)
    acc = np.zeros(hop)
    for start in range(0, n, hop):
        seg = window[start : start + hop]
        acc[: len(seg)] += seg
    return bool(np.ptp(acc) <= tol * max(acc.max(), 1.0))


@dataclass(frozen=True)
class StftConfig:
    win_len: int = 128
    overlap: float = 0.5

    def __post_init__(self):
        hop = self.win_len * (1.0 - self.overlap)
        if self.win_len < 2 or self.win_len % 2 or not 0 <= self.overlap < 1 or hop != int(hop) or hop < 1:
            raise InvalidParameterError(f"invalid STFT configuration {self}")
        if not is_cola(self.window, int(hop)):
            raise InvalidParameterError(f"Hann window with {self.overlap:.0%} overlap is not COLA")

    @property
    def hop(self) -> int:
        return int(self.win_len * (1.0 - self.overlap))

    @property
    def window(self) -> np.ndarray:
        return hann(self.win_len)

    @property
    def n_freqs(self) -> int:
        return self.win_len // 2 + 1

    def n_frames(self, length: int) -> int:
        padded = length + self.win_len
        return -(-(padded - self.win_len) // self.hop) + 1


def stft(x, cfg: StftConfig = StftConfig()) -> np.ndarray:
    """One-sided STFT as real/imaginary channels.

    The series is zero-padded by half a window on both sides (and at the end
    to complete the last frame), so a length-4096 input gives 65 frames at
    hop 64. Output shape is ``(2, n_freqs, n_frames)``, with a leading batch
    axis when ``x`` is 2-D.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    length = x.shape[-1]
    half = cfg.win_len // 2
    frames = cfg.n_frames(length)
    total = (frames - 1) * cfg.hop + cfg.win_len
    padded = np.zeros(x.shape[:-1] + (total,))
    padded[..., half : half + length] = x
    idx = np.arange(frames)[:, None] * cfg.hop + np.arange(cfg.win_len)[None, :]
    segs = padded[..., idx] * cfg.window
    spec = np.fft.rfft(segs, axis=-1)  # (..., frames, freqs)
    out = np.stack([spec.real, spec.imag], axis=-3)  # (..., 2, frames, freqs)
    out = np.swapaxes(out, -1, -2)
    return out[0] if single else out


def istft(S, cfg: StftConfig = StftConfig(), length: int | None = None) -> np.ndarray:
    """Inverse of :func:`stft` by weighted overlap-add.

    ``length`` defaults to ``(n_frames - 1) * hop``, the original length
    whenever it is a multiple of the hop.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim < 3 or S.shape[-3] != 2 or S.shape[-2] != cfg.n_freqs:
        raise InvalidInputError(f"STFT array of shape {S.shape} does not match {cfg}")
    single = S.ndim == 3
    S = S[None] if single else S
    frames = S.shape[-1]
    if length is None:
        length = (frames - 1) * cfg.hop
    if cfg.n_frames(length) != frames:
        raise InvalidInputError(f"{frames} frames cannot come from a series of length {length}")
    spec = np.swapaxes(S[..., 0, :, :] + 1j * S[..., 1, :, :], -1, -2)  # (..., frames, freqs)
    segs = np.fft.irfft(spec, n=cfg.win_len, axis=-1) * cfg.window
    total = (frames - 1) * cfg.hop + cfg.win_len
    out = np.zeros(S.shape[:-3] + (total,))
    norm = np.zeros(total)
    w2 = cfg.window**2
    for f in range(frames):
        sl = slice(f * cfg.hop, f * cfg.hop + cfg.win_len)
        out[..., sl] += segs[..., f, :]
        norm[sl] += w2
    half = cfg.win_len // 2
    res = out[..., half : half + length] / norm[half : half + length]
    return res[0] if single else res
