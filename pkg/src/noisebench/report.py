"""Report emission: JSON document, plot-ready CSV exports and PNG figures.

Everything written here is a pure function of the report contents, so two runs
on the same data produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .harness import EvalReport  # noqa: E402
from .spectral import PsdEstimate  # noqa: E402

# PNG text chunks otherwise carry the matplotlib version string
_PNG_METADATA = {"Software": None}

_STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 100,
}


def _fmt(x: float) -> str:
    return repr(float(x))


def write_json(doc: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n")
    return path


def write_psd_csv(path, **curves: PsdEstimate) -> Path:
    """One frequency column followed by one column per named PSD curve."""
    path = Path(path)
    names = list(curves)
    freqs = curves[names[0]].freqs
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["freq"] + names)
        cols = [curves[n].values for n in names]
        for i, f in enumerate(freqs):
            w.writerow([_fmt(f)] + [_fmt(c[i]) for c in cols])
    return path


def write_param_samples_csv(report: EvalReport, path) -> Path:
    """Long format: dataset, parameter, index, value."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset", "parameter", "index", "value"])
        for which, est in (("target", report.target_estimates), ("generated", report.generated_estimates)):
            for name, values in est.values.items():
                for i, v in enumerate(values):
                    w.writerow([which, name, i, _fmt(v)])
    return path


def plot_psd(report: EvalReport, path) -> Path:
    """Log-log median PSDs of target and generated data."""
    pt, pg = report.median_psd_target, report.median_psd_generated
    sel = pt.freqs > 0
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        ax.loglog(pt.freqs[sel], pt.values[sel], color="k", lw=1.2, label="target")
        ax.loglog(pg.freqs[sel], pg.values[sel], color="tab:red", lw=1.0, ls="--", label="generated")
        ax.set_xlabel("frequency (cycles/sample)")
        ax.set_ylabel("median PSD")
        ax.set_title(f"{report.case_id}   d_g = {report.geodesic_distance:.4f}", fontsize=9)
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path, format="png", metadata=_PNG_METADATA)
        plt.close(fig)
    return Path(path)


def plot_parameters(report: EvalReport, path) -> Path | None:
    """Side-by-side boxplots of target and generated estimates, one panel per
    parameter, with the true value as a horizontal line. Returns None for
    parameter-free models."""
    names = list(report.true_params)
    if not names:
        return None
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(1, len(names), figsize=(2.6 * len(names) + 0.6, 3.2), squeeze=False)
        for ax, name in zip(axes[0], names):
            data = [report.target_estimates.values[name], report.generated_estimates.values[name]]
            data = [d if d.size else np.array([np.nan]) for d in data]
            ax.boxplot(data, whis=1.5, showfliers=True, flierprops={"markersize": 2})
            ax.set_xticks([1, 2], ["target", "generated"])
            ax.axhline(report.true_params[name], color="tab:blue", lw=0.8, ls=":")
            ax.set_title(name, fontsize=9)
        fig.suptitle(report.case_id, fontsize=9)
        fig.tight_layout()
        fig.savefig(path, format="png", metadata=_PNG_METADATA)
        plt.close(fig)
    return Path(path)


def write_report(report: EvalReport, path, figures: bool = True) -> dict[str, Path]:
    """Write the JSON report at ``path`` plus CSV exports and figures next to it,
    sharing its stem. Returns the written paths by role."""
    path = Path(path)
    stem = path.with_suffix("")
    out = {"report": write_json(report.to_dict(), path)}
    out["psd_csv"] = write_psd_csv(
        stem.with_name(stem.name + "_psd.csv"),
        target=report.median_psd_target,
        generated=report.median_psd_generated,
    )
    out["params_csv"] = write_param_samples_csv(report, stem.with_name(stem.name + "_params.csv"))
    if figures:
        out["psd_png"] = plot_psd(report, stem.with_name(stem.name + "_psd.png"))
        box = plot_parameters(report, stem.with_name(stem.name + "_params.png"))
        if box is not None:
            out["params_png"] = box
    return out
