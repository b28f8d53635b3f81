"""In-memory dataset container shared by generators, I/O and evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .errors import InvalidInputError


@dataclass
class TimeSeriesDataset:
    """``n_series`` real time series of equal length.

    ``values`` has shape ``(n_series, series_len)`` for single-channel data or
    ``(n_series, channels, series_len)`` otherwise.
    """

    values: np.ndarray
    spec: Optional[Any] = None
    master_seed: Optional[int] = None
    provenance: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.ndim not in (2, 3):
            raise InvalidInputError(f"dataset values must be 2-D or 3-D, got shape {self.values.shape}")

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def series_len(self) -> int:
        return self.values.shape[-1]

    @property
    def channels(self) -> int:
        return 1 if self.values.ndim == 2 else self.values.shape[1]

    def __len__(self):
        return self.n_series

    def series(self) -> np.ndarray:
        """Single-channel view, shape ``(n_series, series_len)``."""
        if self.values.ndim == 2:
            return self.values
        if self.channels != 1:
            raise InvalidInputError(f"expected single-channel data, got {self.channels} channels")
        return self.values[:, 0, :]
