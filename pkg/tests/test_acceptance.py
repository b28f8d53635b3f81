"""Acceptance criteria, each checked at its stated tolerance and Monte-Carlo size.

Every criterion records one PASS/FAIL line; the lines are printed in the
terminal summary (see conftest.py) and when this file is run as a script.
"""

from __future__ import annotations

import filecmp
import math
import os
import shutil
import subprocess
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from noisebench.estimators import (
    EULER_GAMMA,
    bg_fit_em,
    fdwn_d_whittle,
    hurst_discrete_variations,
    sas_fit_logmoments,
    sas_params_from_log_moments,
    shot_event_rate,
)
from noisebench.harness import builtin_suite, evaluate
from noisebench.noise_models import (
    BandLimited,
    Bg,
    Fbm,
    Fdwn,
    Fgn,
    PulseShape,
    Sas,
    Shot,
    butterworth_bandpass,
    fgn_autocovariance,
    psd_exponent,
    pulse_integrals,
    simulate_dataset,
    zero_phase_filter,
)
from noisebench.spectral import PsdEstimate, geodesic_distance, loglog_slope, median_psd
from noisebench.transforms import StftConfig, istft, quantile_fit, stft
from noisebench.variates import derive_stream


N_SERIES = 4096
L = 4096

RESULTS: list[str] = []


def record(number: int, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def lag_acvf(x, lags):
    n = x.shape[1]
    return np.array([np.mean(x[:, : n - k] * x[:, k:]) for k in lags])


# --- 1 ------------------------------------------------------------------------------------------


def test_01_fgn_exactness():
    lags = np.arange(9)
    worst = 0.0
    t0 = time.perf_counter()
    for i, H in enumerate((0.2, 0.5, 0.8)):
        x = simulate_dataset(Fgn(H), N_SERIES, L, master_seed=100 + i).values
        err = np.abs(lag_acvf(x, lags) - fgn_autocovariance(H, 1.0, lags)).max()
        worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    ok = worst <= 0.01 and elapsed < 120
    assert record(1, ok, f"max |ACVF error| lags 0..8 = {worst:.4f} (<= 0.01), runtime {elapsed:.1f}s (< 120s)")


# --- 2 ------------------------------------------------------------------------------------------


def test_02_fbm_scaling():
    ratios = {}
    for i, H in enumerate((0.2, 0.8)):
        x = simulate_dataset(Fbm(H), N_SERIES, L, master_seed=200 + i).values
        for n in (4, 16, 64):
            ratios[(H, n)] = float(np.mean(x[:, n] ** 2) / n ** (2 * H))
    ok = all(0.95 <= r <= 1.05 for r in ratios.values())
    text = ", ".join(f"H={H} n={n}: {r:.3f}" for (H, n), r in ratios.items())
    assert record(2, ok, f"Var[B[n]]/n^2H in [0.95, 1.05]: {text}")


# --- 3 ------------------------------------------------------------------------------------------


def test_03_psd_exponents():
    specs = [Fdwn(0.3), Fdwn(-0.3), Fgn(0.2), Fgn(0.8), Fbm(0.2), Fbm(0.8)]
    parts, ok = [], True
    for i, spec in enumerate(specs):
        P = median_psd(simulate_dataset(spec, N_SERIES, L, master_seed=300 + i))
        slope = loglog_slope(P, 0.002, 0.05)
        eta = psd_exponent(spec)
        good = abs(slope - eta) <= 0.15
        ok &= good
        label = f"{spec.kind} {'d' if spec.kind == 'fdwn' else 'H'}={spec.d if spec.kind == 'fdwn' else spec.H}"
        parts.append(f"{label} {slope:+.3f} vs {eta:+.2f}{'' if good else ' !'}")
    assert record(3, ok, "median-PSD slopes on [0.002, 0.05] within 0.15: " + "; ".join(parts))


# --- 4 ------------------------------------------------------------------------------------------


def test_04_shot_moments():
    worst = {"mean": 0.0, "var": 0.0, "nu": 0.0}
    where = {}
    seed = 400
    for pulse in PulseShape:
        i1, i2 = pulse_integrals(pulse, 1.0)
        for nu in (0.25, 1.0, 3.0):
            seed += 1
            x = simulate_dataset(Shot(nu, pulse=pulse), N_SERIES, L, master_seed=seed).values
            rel = {
                "mean": abs(x.mean() / (nu * i1) - 1),
                "var": abs(x.var() / (2 * nu * i2) - 1),
                "nu": abs(np.mean([shot_event_rate(r, pulse) for r in x]) / nu - 1),
            }
            for k, v in rel.items():
                if v > worst[k]:
                    worst[k], where[k] = v, f"{pulse.value} nu={nu}"
    ok = worst["mean"] <= 0.02 and worst["var"] <= 0.03 and worst["nu"] <= 0.03
    detail = ", ".join(f"max rel {k} error {worst[k]:.4f} ({where[k]})" for k in worst)
    assert record(4, ok, detail + " [limits 0.02 / 0.03 / 0.03]")


# --- 5 ------------------------------------------------------------------------------------------


def test_05_geodesic_properties():
    f = np.arange(2049) / 4096
    P = PsdEstimate(f, np.exp(derive_stream(500, 0).std_normal(2049)))
    d0 = geodesic_distance(P, P)
    dk = max(geodesic_distance(PsdEstimate(f, k * P.values), P) for k in (1e-3, 7.3, 1e3))
    half = np.where(np.arange(2048) % 2 == 0, math.e, 1.0)
    f2 = np.arange(2048) / 4094
    dh = geodesic_distance(PsdEstimate(f2, half), PsdEstimate(f2, np.ones(2048)))
    ok = d0 == 0 and dk < 1e-12 and abs(dh - 0.5) <= 1e-12
    assert record(5, ok, f"d(P,P)={d0}, max d(P,kP)={dk:.1e}, half-bins case {dh:.15f}")


# --- 6 ------------------------------------------------------------------------------------------

CASE_SIZE = 1024


@lru_cache(maxsize=1)
def noise_floor_runs():
    """Target vs independent target for every built-in case at test size 1024."""
    out = {}
    for j, case in enumerate(builtin_suite()):
        a = simulate_dataset(case.spec, CASE_SIZE, case.series_len, master_seed=600_000 + 2 * j)
        b = simulate_dataset(case.spec, CASE_SIZE, case.series_len, master_seed=600_001 + 2 * j)
        rep = evaluate(a, b, case.spec, case_id=case.case_id)
        out[case.case_id] = rep
    return out


def test_06_target_vs_target_floor():
    reports = noise_floor_runs()
    dist_fail, param_fail = [], []
    worst = max(reports.values(), key=lambda r: r.geodesic_distance)
    for cid, rep in reports.items():
        if not rep.geodesic_distance < 0.05:
            dist_fail.append(f"{cid}={rep.geodesic_distance:.3f}")
        # Monte-Carlo bound: the true value lies inside the target estimates' interquartile box
        for which in ("target", "generated"):
            for name, s in rep.summaries(which).items():
                truth = rep.true_params[name]
                if s is None or not s.q1 <= truth <= s.q3:
                    param_fail.append(f"{cid}:{which}:{name}")
    failures = sum(r.target_estimates.failures + r.generated_estimates.failures for r in reports.values())
    ok = not dist_fail and not param_fail
    detail = (
        f"{len(reports)} cases, max d_g {worst.geodesic_distance:.4f} ({worst.case_id}); "
        f"d_g >= 0.05 in {len(dist_fail)} cases {dist_fail}; truth outside IQR in {len(param_fail)} {param_fail}; "
        f"estimator failures skipped {failures}"
    )
    assert record(6, ok, detail)


# --- 7 ------------------------------------------------------------------------------------------


def test_07_estimator_recovery():
    msgs, ok = [], True
    seed = 700

    def rows(spec):
        nonlocal seed
        seed += 1
        return simulate_dataset(spec, N_SERIES, L, master_seed=seed).values

    for H in (0.2, 0.5, 0.8):
        for spec, kind in ((Fgn(H), "fgn"), (Fbm(H), "fbm")):
            m = np.mean([hurst_discrete_variations(r, kind) for r in rows(spec)])
            good = abs(m - H) <= 0.02
            ok &= good
            msgs.append(f"{kind} H={H}: {m:.4f}")
    for d in (-0.3, 0.0, 0.3):
        m = np.mean([fdwn_d_whittle(r) for r in rows(Fdwn(d))])
        good = abs(m - d) <= 0.02
        ok &= good
        msgs.append(f"d={d}: {m:+.4f}")
    for p in (0.05, 0.1, 0.5):
        fits = [bg_fit_em(r) for r in rows(Bg(p))]
        mp = np.median([f.p_hat for f in fits])
        mt = np.median([f.theta_hat for f in fits])
        good = abs(mp - p) <= 0.01 and abs(mt - 10.05) <= 0.5
        ok &= good
        msgs.append(f"BG p={p}: p^={mp:.4f} theta^={mt:.3f}")
    for a in (1.0, 1.5):
        fits = [sas_fit_logmoments(r) for r in rows(Sas(a))]
        ma = np.mean([f.alpha_hat for f in fits])
        mg = np.mean([f.gamma_hat for f in fits])
        good = abs(ma - a) <= 0.03 and abs(mg - 1.0) <= 0.03
        ok &= good
        msgs.append(f"SaS alpha={a}: alpha^={ma:.4f} gamma^={mg:.4f}")
    assert record(7, ok, "; ".join(msgs))


# --- 8 ------------------------------------------------------------------------------------------


def test_08_sas_log_moment_anchors():
    v2 = np.var(np.log(np.abs(derive_stream(800, 0).sas_standard(2.0, 1_000_000))))
    v1 = np.var(np.log(np.abs(derive_stream(800, 1).sas_standard(1.0, 1_000_000))))
    r2, r1 = v2 / (math.pi**2 / 8), v1 / (math.pi**2 / 4)
    a2 = sas_params_from_log_moments(-0.5 * EULER_GAMMA, math.pi**2 / 8)
    a1 = sas_params_from_log_moments(0.0, math.pi**2 / 4)
    exact = (
        abs(a2.alpha_hat - 2) < 1e-12 and abs(a2.gamma_hat - 1) < 1e-12
        and abs(a1.alpha_hat - 1) < 1e-12 and abs(a1.gamma_hat - 1) < 1e-12
    )
    ok = abs(r2 - 1) <= 0.01 and abs(r1 - 1) <= 0.01 and exact
    detail = (f"Var ln|X| / anchor: alpha=2 {r2:.4f}, alpha=1 {r1:.4f} (within 1%); "
              f"analytic inversion exact: {exact}")
    assert record(8, ok, detail)


# --- 9 ------------------------------------------------------------------------------------------


def test_09_transform_round_trips():
    x = derive_stream(900, 0).std_normal(L)
    errs, shapes = [], []
    for win, ov in ((128, 0.5), (256, 0.75)):
        cfg = StftConfig(win, ov)
        S = stft(x, cfg)
        shapes.append(S.shape[1:])
        errs.append(np.max(np.abs(istft(S, cfg, L) - x)) / np.max(np.abs(x)))
    data = derive_stream(900, 1).exponential(1.0, 1_000_000)
    m = quantile_fit(data, 1024)
    q = m.quantiles[0]
    inside = data[(data > q[0]) & (data < q[-1])][:100_000]
    qerr = np.max(np.abs(m.invert(m.apply(inside)) - inside) / np.abs(inside))
    hi, lo = m.apply(np.array([q[-1], q[-1] + 100, q[-1] + 1e9])), m.apply(np.array([q[0], q[0] - 100]))
    clip_exact = hi[0] == hi[1] == hi[2] and lo[0] == lo[1]
    inv = m.invert(np.array([-40.0, 40.0]))
    clip_exact &= inv[0] == q[0] and inv[1] == q[-1]
    ok = shapes == [(65, 65), (129, 65)] and max(errs) < 1e-9 and qerr < 1e-9 and clip_exact
    assert record(9, ok, f"STFT shapes {shapes}, rel errors {errs[0]:.1e}/{errs[1]:.1e}; "
                         f"quantile rel error {qerr:.1e}; clipping exact {clip_exact}")


# --- 10 -----------------------------------------------------------------------------------------


def test_10_butterworth():
    sos = butterworth_bandpass(40, 0.1, 0.15)
    single = 20 * np.log10(np.abs(sos.response([0.1, 0.15])))
    n = np.arange(32768)
    mid = slice(8192, 24576)
    double = np.array([
        20 * np.log10(np.max(np.abs(zero_phase_filter(sos, np.cos(2 * np.pi * f * n))[mid])))
        for f in (0.1, 0.15)
    ])
    P = median_psd(simulate_dataset(BandLimited(0.1, 0.15), 1024, L, master_seed=1000))
    inband = np.median(P.values[(P.freqs >= 0.1) & (P.freqs <= 0.15)])
    # stopband: every bin at least one bandwidth away from the passband
    stop = np.median(P.values[(P.freqs <= 0.05) | (P.freqs >= 0.2)])
    outside = np.median(P.values[(P.freqs < 0.1) | (P.freqs > 0.15)])
    contrast = 10 * np.log10(inband / stop)
    ok = (np.all(np.abs(single + 3.0103) <= 0.1) and np.all(np.abs(double + 6.0206) <= 0.2) and contrast > 60)
    assert record(10, ok, f"edges single pass {single.round(3)} dB, zero-phase {double.round(3)} dB, "
                          f"median in-band vs median stopband {contrast:.1f} dB (> 60; "
                          f"vs all out-of-band bins {10 * np.log10(inband / outside):.1f} dB)")


# --- 11 -----------------------------------------------------------------------------------------


def test_11_sensitivity():
    floor = noise_floor_runs()["fgn_H0p8"].geodesic_distance
    target = simulate_dataset(Fgn(0.8), N_SERIES, L, master_seed=1100)
    generated = simulate_dataset(Fgn(0.6), N_SERIES, L, master_seed=1101)
    rep = evaluate(target, generated, Fgn(0.8))
    st, sg = rep.target_param_summary["H"], rep.generated_param_summary["H"]
    disjoint = sg.q3 < st.q1 or st.q3 < sg.q1
    ok = rep.geodesic_distance > 5 * floor and disjoint
    assert record(11, ok, f"d_g {rep.geodesic_distance:.4f} vs 5 x floor {5 * floor:.4f}; "
                          f"H IQRs target [{st.q1:.3f}, {st.q3:.3f}] generated [{sg.q1:.3f}, {sg.q3:.3f}]")


# --- 12 -----------------------------------------------------------------------------------------


def _run_suite(outdir: Path):
    cmd = [sys.executable, "-m", "noisebench.cli", "suite", "--run", "--scale", "0.05", "--seed", "42",
           "--outdir", str(outdir), "--quiet"]
    subprocess.run(cmd, check=True)


def test_12_bit_reproducibility(tmp_path_factory):
    root = tmp_path_factory.mktemp("suite")
    a, b = root / "a", root / "b"
    try:
        _run_suite(a)
        _run_suite(b)
        files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
        other = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
        differing = [str(f) for f in files if not filecmp.cmp(a / f, b / f, shallow=False)]
        kinds = sorted({f.suffix for f in files})
        ok = files == other and not differing and len(files) > 0
        detail = f"{len(files)} files {kinds} compared byte-for-byte, {len(differing)} differ {differing[:5]}"
    finally:
        shutil.rmtree(root, ignore_errors=True)
    assert record(12, ok, detail)


if __name__ == "__main__":
    sys.exit(pytest.main([os.path.abspath(__file__), "-q", "-p", "no:cacheprovider"]))
