"""Synthetic noise benchmark: target simulators, spectral and parameter
estimators, preprocessing transforms and the evaluation harness."""

__version__ = "0.1.0"

from .dataset import TimeSeriesDataset  # noqa: E402
from .errors import NoiseBenchError  # noqa: E402

__all__ = ["TimeSeriesDataset", "NoiseBenchError", "__version__"]
