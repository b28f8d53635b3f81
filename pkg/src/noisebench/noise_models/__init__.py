"""Target noise simulators."""

from __future__ import annotations

import numpy as np

from ..dataset import TimeSeriesDataset
from ..variates import RngStream, derive_stream
from .bandlimited import SosCascade, butterworth_bandpass, default_bands, simulate_bandlimited, zero_phase_filter
from .impulsive import simulate_bg, simulate_sas_series
from .power_law import (
    fdwn_autocovariance,
    fgn_autocovariance,
    psd_exponent,
    simulate_fbm,
    simulate_fdwn,
    simulate_fdwn_batch,
    simulate_fgn,
)
from .shot import pulse_integrals, pulse_value, simulate_shot
from .specs import (
    BandLimited,
    Bg,
    Fbm,
    Fdwn,
    Fgn,
    NoiseSpec,
    PulseShape,
    Sas,
    Shot,
    make_spec,
    spec_from_dict,
    spec_to_dict,
)

DEFAULT_LENGTH = 4096

# FDWN rows are generated in fixed-size blocks so that a series never depends on
# how many series were requested
_FDWN_BLOCK = 64

_SIMULATORS = {
    BandLimited: simulate_bandlimited,
    Fdwn: simulate_fdwn,
    Fgn: simulate_fgn,
    Fbm: simulate_fbm,
    Shot: simulate_shot,
    Bg: simulate_bg,
    Sas: simulate_sas_series,
}


def simulate(spec: NoiseSpec, L: int, s: RngStream) -> np.ndarray:
    """One series of length ``L`` from ``spec``."""
    return _SIMULATORS[type(spec)](spec, L, s)


def simulate_dataset(spec: NoiseSpec, n_series: int, L: int = DEFAULT_LENGTH, master_seed: int = 0) -> TimeSeriesDataset:
    """``n_series`` series, series ``i`` drawn from ``derive_stream(master_seed, i)``."""
    out = np.empty((n_series, L))
    if isinstance(spec, Fdwn):
        for start in range(0, n_series, _FDWN_BLOCK):
            noise = np.stack([derive_stream(master_seed, i).std_normal(L) for i in range(start, start + _FDWN_BLOCK)])
            block = simulate_fdwn_batch(spec, L, noise)
            stop = min(start + _FDWN_BLOCK, n_series)
            out[start:stop] = block[: stop - start]
    else:
        for i in range(n_series):
            out[i] = simulate(spec, L, derive_stream(master_seed, i))
    return TimeSeriesDataset(
        values=out,
        spec=spec,
        master_seed=master_seed,
        provenance="noisebench target simulator",
        params={"n_series": n_series, "series_len": L},
    )


__all__ = [name for name in dir() if not name.startswith("_")]
