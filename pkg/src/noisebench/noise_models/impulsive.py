"""Memoryless impulsive noise: Bernoulli-Gaussian and symmetric alpha-stable."""

from __future__ import annotations

import numpy as np

from ..variates import RngStream
from .specs import Bg, Sas


def simulate_bg(spec: Bg, L: int, s: RngStream) -> np.ndarray:
    """Background N(0, sigma_w^2) plus Bernoulli(p)-gated N(0, sigma_i^2) impulses."""
    background = spec.sigma_w * s.std_normal(L)
    gate = s.uniform(L) < spec.p
    impulses = spec.sigma_i * s.std_normal(L)
    return background + np.where(gate, impulses, 0.0)


def simulate_sas_series(spec: Sas, L: int, s: RngStream) -> np.ndarray:
    # cf exp(-gamma |u|^alpha) is the standard law scaled by gamma^(1/alpha)
    return spec.delta + spec.gamma ** (1.0 / spec.alpha) * s.sas_standard(spec.alpha, L)
