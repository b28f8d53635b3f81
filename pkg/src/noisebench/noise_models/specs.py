"""Parameterizations of the seven target noise models."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from ..errors import InvalidParameterError


class PulseShape(str, Enum):
    ONE_SIDED_EXPONENTIAL = "one_sided_exponential"
    LINEAR_EXPONENTIAL = "linear_exponential"
    GAUSSIAN = "gaussian"


def _check(cond, msg):
    if not cond:
        raise InvalidParameterError(msg)


@dataclass(frozen=True)
class BandLimited:
    """White Gaussian noise through a zero-phase Butterworth bandpass."""

    f_lo: float
    f_hi: float
    order: int = 40

    kind = "bandlimited"

    def __post_init__(self):
        _check(0 < self.f_lo < self.f_hi < 0.5, f"need 0 < f_lo < f_hi < 0.5, got ({self.f_lo}, {self.f_hi})")
        _check(int(self.order) == self.order and self.order > 0 and self.order % 2 == 0,
               f"filter order must be a positive even integer, got {self.order}")


@dataclass(frozen=True)
class Fdwn:
    """Fractionally differenced white noise."""

    d: float
    sigma_eps2: float = 1.0

    kind = "fdwn"

    def __post_init__(self):
        _check(-0.5 < self.d < 0.5, f"d must lie in (-0.5, 0.5), got {self.d}")
        _check(self.sigma_eps2 > 0, "sigma_eps2 must be positive")


@dataclass(frozen=True)
class Fgn:
    H: float
    sigma_y2: float = 1.0

    kind = "fgn"

    def __post_init__(self):
        _check(0 < self.H < 1, f"H must lie in (0, 1), got {self.H}")
        _check(self.sigma_y2 > 0, "sigma_y2 must be positive")


@dataclass(frozen=True)
class Fbm:
    H: float
    sigma_y2: float = 1.0

    kind = "fbm"

    def __post_init__(self):
        _check(0 < self.H < 1, f"H must lie in (0, 1), got {self.H}")
        _check(self.sigma_y2 > 0, "sigma_y2 must be positive")


@dataclass(frozen=True)
class Shot:
    """Filtered Poisson process with exponential amplitudes."""

    nu: float
    beta: float = 1.0
    sigma_d: float = 1.0
    dt: float = 0.1
    pulse: PulseShape = PulseShape.ONE_SIDED_EXPONENTIAL

    kind = "shot"

    def __post_init__(self):
        _check(self.nu > 0, "event rate nu must be positive")
        _check(self.beta > 0, "mean amplitude beta must be positive")
        _check(self.sigma_d > 0, "pulse duration sigma_d must be positive")
        _check(self.dt > 0, "grid step dt must be positive")
        object.__setattr__(self, "pulse", PulseShape(self.pulse))


@dataclass(frozen=True)
class Bg:
    """Bernoulli-Gaussian impulsive noise."""

    p: float
    sigma_w: float = 0.1
    sigma_i: float = 1.0

    kind = "bg"

    def __post_init__(self):
        _check(0 <= self.p <= 1, f"impulse probability must lie in [0, 1], got {self.p}")
        _check(self.sigma_w > 0 and self.sigma_i > 0, "component scales must be positive")

    @property
    def theta(self) -> float:
        """Scale ratio of the impulsive to the background component."""
        return math.sqrt(self.sigma_w**2 + self.sigma_i**2) / self.sigma_w


@dataclass(frozen=True)
class Sas:
    """I.i.d. symmetric alpha-stable noise, characteristic function exp(i*delta*u - gamma*|u|^alpha)."""

    alpha: float
    gamma: float = 1.0
    delta: float = 0.0

    kind = "sas"

    def __post_init__(self):
        _check(0 < self.alpha <= 2, f"alpha must lie in (0, 2], got {self.alpha}")
        _check(self.gamma > 0, "scale gamma must be positive")


NoiseSpec = Union[BandLimited, Fdwn, Fgn, Fbm, Shot, Bg, Sas]

SPEC_TYPES = {cls.kind: cls for cls in (BandLimited, Fdwn, Fgn, Fbm, Shot, Bg, Sas)}


def spec_to_dict(spec: NoiseSpec) -> dict:
    out = {"model": spec.kind}
    for f in dataclasses.fields(spec):
        v = getattr(spec, f.name)
        out[f.name] = v.value if isinstance(v, Enum) else v
    return out


def spec_from_dict(data: dict) -> NoiseSpec:
    data = dict(data)
    try:
        cls = SPEC_TYPES[data.pop("model")]
    except KeyError as exc:
        raise InvalidParameterError(f"unknown or missing noise model: {exc}") from None
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise InvalidParameterError(f"unknown parameters for {cls.kind}: {sorted(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise InvalidParameterError(f"bad parameters for {cls.kind}: {exc}") from None


def make_spec(model: str, **params) -> NoiseSpec:
    return spec_from_dict({"model": model, **params})
