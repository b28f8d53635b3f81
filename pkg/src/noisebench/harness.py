"""Benchmark battery: built-in cases, evaluation of generated against target data,
and boxplot summaries of parameter-estimate distributions."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .dataset import TimeSeriesDataset
from .errors import InvalidInputError, NoiseBenchError
from .estimators import (
    bg_fit_em,
    fdwn_d_whittle,
    hurst_discrete_variations,
    sas_fit_logmoments,
    shot_event_rate,
)
from .noise_models import default_bands
from .noise_models.specs import BandLimited, Bg, Fbm, Fdwn, Fgn, NoiseSpec, PulseShape, Sas, Shot, spec_to_dict
from .spectral import MultitaperConfig, PsdEstimate, geodesic_distance, median_psd

REPORT_SCHEMA_VERSION = 1

HURST_GRID = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95)
SHOT_RATES = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0)
BG_PROBS = (0.01, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
SAS_ALPHAS = (0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5)


@dataclass(frozen=True)
class BenchmarkCase:
    case_id: str
    spec: NoiseSpec
    train_size: int = 16384
    test_size: int = 4096
    series_len: int = 4096

    def __post_init__(self):
        if min(self.train_size, self.test_size, self.series_len) <= 0:
            raise InvalidInputError(f"case {self.case_id}: sizes must be positive")

    def scaled(self, scale: float) -> "BenchmarkCase":
        """Same case with dataset sizes shrunk by ``scale`` (series length unchanged)."""
        return BenchmarkCase(
            self.case_id,
            self.spec,
            train_size=max(1, int(round(self.train_size * scale))),
            test_size=max(1, int(round(self.test_size * scale))),
            series_len=self.series_len,
        )


def _tag(x: float) -> str:
    return f"{x:g}".replace(".", "p")


def builtin_suite() -> list[BenchmarkCase]:
    """The 100 benchmark cases with the default fixed parameters."""
    cases = []
    for i, (lo, hi) in enumerate(default_bands(), start=1):
        cases.append(BenchmarkCase(f"bandlimited_band{i}", BandLimited(lo, hi)))
    for H in HURST_GRID:
        cases.append(BenchmarkCase(f"fdwn_d{_tag(round(H - 0.5, 10))}", Fdwn(round(H - 0.5, 10))))
    for H in HURST_GRID:
        cases.append(BenchmarkCase(f"fgn_H{_tag(H)}", Fgn(H)))
    for H in HURST_GRID:
        cases.append(BenchmarkCase(f"fbm_H{_tag(H)}", Fbm(H)))
    for pulse in PulseShape:
        for nu in SHOT_RATES:
            cases.append(BenchmarkCase(f"shot_{pulse.value}_nu{_tag(nu)}", Shot(nu, pulse=pulse)))
    for p in BG_PROBS:
        cases.append(BenchmarkCase(f"bg_p{_tag(p)}", Bg(p)))
    for a in SAS_ALPHAS:
        cases.append(BenchmarkCase(f"sas_alpha{_tag(a)}", Sas(a)))
    return cases


# --- parameter estimation per model -----------------------------------------------------


def true_parameters(spec: NoiseSpec) -> dict[str, float]:
    if isinstance(spec, Fdwn):
        return {"d": spec.d}
    if isinstance(spec, (Fgn, Fbm)):
        return {"H": spec.H}
    if isinstance(spec, Shot):
        return {"nu": spec.nu}
    if isinstance(spec, Bg):
        return {"p": spec.p, "theta": spec.theta}
    if isinstance(spec, Sas):
        return {"alpha": spec.alpha, "gamma": spec.gamma}
    return {}


def _estimator(spec: NoiseSpec):
    if isinstance(spec, Fdwn):
        return lambda x: {"d": fdwn_d_whittle(x)}
    if isinstance(spec, Fgn):
        return lambda x: {"H": hurst_discrete_variations(x, "fgn")}
    if isinstance(spec, Fbm):
        return lambda x: {"H": hurst_discrete_variations(x, "fbm")}
    if isinstance(spec, Shot):
        return lambda x: {"nu": shot_event_rate(x, spec.pulse, spec.sigma_d)}
    if isinstance(spec, Bg):

        def fit_bg(x):
            fit = bg_fit_em(x)
            return {"p": fit.p_hat, "theta": fit.theta_hat}

        return fit_bg
    if isinstance(spec, Sas):

        def fit_sas(x):
            fit = sas_fit_logmoments(x)
            return {"alpha": fit.alpha_hat, "gamma": fit.gamma_hat}

        return fit_sas
    return None


@dataclass
class ParameterEstimates:
    values: dict[str, np.ndarray]
    failures: int
    n_series: int

    @property
    def failure_rate(self) -> float:
        return self.failures / self.n_series if self.n_series else 0.0


def estimate_parameters(ds, spec: NoiseSpec) -> ParameterEstimates:
    """Run the model's estimator on every series; failing series are skipped and counted."""
    x = ds.series() if isinstance(ds, TimeSeriesDataset) else np.atleast_2d(ds)
    names = list(true_parameters(spec))
    est = _estimator(spec)
    collected = {name: [] for name in names}
    failures = 0
    if est is not None:
        for row in x:
            try:
                got = est(row)
            except (NoiseBenchError, FloatingPointError, ValueError):
                failures += 1
                continue
            if not all(math.isfinite(v) for v in got.values()):
                failures += 1
                continue
            for name in names:
                collected[name].append(got[name])
    return ParameterEstimates({k: np.asarray(v, dtype=float) for k, v in collected.items()}, failures, len(x))


# --- summaries ----------------------------------------------------------------------------


@dataclass(frozen=True)
class BoxplotSummary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    whisker_lo: float
    whisker_hi: float
    n: int

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1


def boxplot_summary(values) -> BoxplotSummary:
    """Quartiles by linear interpolation; whiskers at the most extreme data within
    1.5 IQR of the box."""
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size == 0:
        raise InvalidInputError("cannot summarize an empty sample")
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    iqr = q3 - q1
    inside = v[(v >= q1 - 1.5 * iqr) & (v <= q3 + 1.5 * iqr)]
    return BoxplotSummary(
        min=float(v[0]),
        q1=float(q1),
        median=float(med),
        q3=float(q3),
        max=float(v[-1]),
        whisker_lo=float(min(inside[0], q1)),
        whisker_hi=float(max(inside[-1], q3)),
        n=int(v.size),
    )


# --- evaluation -------------------------------------------------------------------------------


@dataclass
class EvalReport:
    case_id: str
    spec: NoiseSpec
    geodesic_distance: float
    median_psd_target: PsdEstimate
    median_psd_generated: PsdEstimate
    target_estimates: ParameterEstimates
    generated_estimates: ParameterEstimates
    multitaper: MultitaperConfig
    seeds: dict = field(default_factory=dict)
    tool_version: str = __version__

    @property
    def true_params(self) -> dict[str, float]:
        return true_parameters(self.spec)

    @property
    def target_param_summary(self) -> dict[str, BoxplotSummary | None]:
        return self.summaries("target")

    @property
    def generated_param_summary(self) -> dict[str, BoxplotSummary | None]:
        return self.summaries("generated")

    def summaries(self, which: str) -> dict[str, BoxplotSummary | None]:
        est = self.target_estimates if which == "target" else self.generated_estimates
        return {k: (boxplot_summary(v) if v.size else None) for k, v in est.values.items()}

    def to_dict(self) -> dict:
        def pack(est: ParameterEstimates, which: str):
            return {
                "n_series": est.n_series,
                "failures": est.failures,
                "failure_rate": est.failure_rate,
                "summary": {k: (asdict(s) if s else None) for k, s in self.summaries(which).items()},
            }

        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "tool": "noisebench",
            "tool_version": self.tool_version,
            "case_id": self.case_id,
            "spec": spec_to_dict(self.spec),
            "true_parameters": self.true_params,
            "multitaper": asdict(self.multitaper),
            "geodesic_distance": self.geodesic_distance,
            "target": pack(self.target_estimates, "target"),
            "generated": pack(self.generated_estimates, "generated"),
            "seeds": self.seeds,
        }


def evaluate(
    target: TimeSeriesDataset,
    generated: TimeSeriesDataset,
    spec: NoiseSpec,
    cfg: MultitaperConfig = MultitaperConfig(),
    case_id: str = "",
) -> EvalReport:
    """Score ``generated`` against ``target``: geodesic distance between the median
    PSDs and the distributions of per-series parameter estimates."""
    if target.n_series == 0 or generated.n_series == 0:
        raise InvalidInputError("target and generated datasets must be nonempty")
    if target.series_len != generated.series_len:
        raise InvalidInputError(
            f"series lengths differ: target {target.series_len}, generated {generated.series_len}"
        )
    pt = median_psd(target, cfg)
    pg = median_psd(generated, cfg)
    return EvalReport(
        case_id=case_id or spec.kind,
        spec=spec,
        geodesic_distance=geodesic_distance(pg, pt),
        median_psd_target=pt,
        median_psd_generated=pg,
        target_estimates=estimate_parameters(target, spec),
        generated_estimates=estimate_parameters(generated, spec),
        multitaper=cfg,
        seeds={"target": target.master_seed, "generated": generated.master_seed},
    )
