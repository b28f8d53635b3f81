"""Command line interface.

Verbs: ``generate``, ``evaluate``, ``estimate``, ``psd`` and ``suite``. On
failure a single JSON line ``{"error": <category>, "message": ...}`` goes to
stderr and the exit status is nonzero.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import zlib
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .dataset_io import load_any, write_dataset
from .errors import InvalidInputError, InvalidParameterError, NoiseBenchError
from .harness import BenchmarkCase, boxplot_summary, builtin_suite, estimate_parameters, evaluate
from .noise_models import make_spec, simulate_dataset, spec_to_dict
from .noise_models.specs import SPEC_TYPES
from .spectral import MultitaperConfig, median_psd
from .variates import splitmix64

EXIT_ERROR = 1
EXIT_USAGE = 2


def _coerce(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_model_params(tokens: list[str]) -> dict:
    """``["--H", "0.8", "--pulse", "gaussian"]`` -> ``{"H": 0.8, "pulse": "gaussian"}``."""
    params = {}
    it = iter(tokens)
    for tok in it:
        if not tok.startswith("--") or len(tok) < 3:
            raise InvalidParameterError(f"unexpected argument {tok!r}")
        key, eq, val = tok[2:].partition("=")
        if not eq:
            try:
                val = next(it)
            except StopIteration:
                raise InvalidParameterError(f"missing value for --{key}") from None
        params[key.replace("-", "_")] = _coerce(val)
    return params


def case_seeds(master_seed: int, case_id: str) -> tuple[int, int]:
    """(train, test) master seeds for a suite case; independent of case order."""
    base = splitmix64(((master_seed & 0xFFFFFFFF) << 32) | zlib.crc32(case_id.encode()))
    return splitmix64(base), splitmix64(base ^ 0x5EED)


def _mt_config(args) -> MultitaperConfig:
    return MultitaperConfig(nw=args.nw, k=args.k, nfft=args.nfft)


def _add_mt_args(p):
    p.add_argument("--nw", type=float, default=4.0, help="time-halfbandwidth product")
    p.add_argument("--k", type=int, default=7, help="number of tapers")
    p.add_argument("--nfft", type=int, default=4096, help="FFT length")


# --- verbs -----------------------------------------------------------------------------


def cmd_generate(args, extra) -> int:
    spec = make_spec(args.model, **parse_model_params(extra))
    ds = simulate_dataset(spec, args.num, args.len, args.seed)
    write_dataset(ds, args.out, dtype=args.dtype)
    print(json.dumps({"wrote": str(args.out), "spec": spec_to_dict(spec), "n_series": args.num, "series_len": args.len}))
    return 0


def _spec_for(ds, args, extra):
    if args.model:
        return make_spec(args.model, **parse_model_params(extra))
    if extra:
        raise InvalidParameterError("model parameters given without --model")
    if ds.spec is None:
        raise InvalidInputError("no noise model in the dataset sidecar; pass --model and its parameters")
    return ds.spec


def cmd_evaluate(args, extra) -> int:
    from .report import write_report

    target = load_any(args.target)
    generated = load_any(args.generated)
    spec = _spec_for(target, args, extra)
    report = evaluate(target, generated, spec, _mt_config(args), case_id=args.case_id or spec.kind)
    paths = write_report(report, args.report, figures=not args.no_figures)
    print(json.dumps({"geodesic_distance": report.geodesic_distance, "files": {k: str(v) for k, v in paths.items()}}))
    return 0


def cmd_estimate(args, extra) -> int:
    ds = load_any(args.inp)
    spec = _spec_for(ds, args, extra)
    est = estimate_parameters(ds, spec)
    doc = {
        "spec": spec_to_dict(spec),
        "n_series": est.n_series,
        "failures": est.failures,
        "summary": {k: (asdict(boxplot_summary(v)) if v.size else None) for k, v in est.values.items()},
    }
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            names = list(est.values)
            w.writerow(["index"] + names)
            for i in range(len(est.values[names[0]]) if names else 0):
                w.writerow([i] + [repr(float(est.values[n][i])) for n in names])
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def cmd_psd(args, extra) -> int:
    from .report import write_psd_csv

    if extra:
        raise InvalidParameterError(f"unexpected arguments {extra}")
    ds = load_any(args.inp)
    write_psd_csv(args.out, median=median_psd(ds, _mt_config(args)))
    return 0


def _suite_cases(args) -> list[BenchmarkCase]:
    cases = builtin_suite()
    if args.cases:
        wanted = set(args.cases.split(","))
        unknown = wanted - {c.case_id for c in cases}
        if unknown:
            raise InvalidParameterError(f"unknown case ids: {sorted(unknown)}")
        cases = [c for c in cases if c.case_id in wanted]
    return cases


def cmd_suite(args, extra) -> int:
    if extra:
        raise InvalidParameterError(f"unexpected arguments {extra}")
    cases = _suite_cases(args)
    if args.list:
        for c in cases:
            print(json.dumps({"case_id": c.case_id, "spec": spec_to_dict(c.spec),
                              "train_size": c.train_size, "test_size": c.test_size, "series_len": c.series_len}))
        return 0
    if not args.outdir:
        raise InvalidParameterError("suite --run needs --outdir")
    if not 0 < args.scale <= 1:
        raise InvalidParameterError(f"--scale must lie in (0, 1], got {args.scale}")
    return run_suite(cases, Path(args.outdir), args.scale, args.seed, figures=not args.no_figures,
                     cfg=_mt_config(args), quiet=args.quiet)


def run_suite(cases, outdir: Path, scale: float, seed: int, figures: bool = True,
              cfg: MultitaperConfig = MultitaperConfig(), quiet: bool = False) -> int:
    """Per case: simulate train and independent test sets, write both, and score
    a train subset against the test set as the sampling-noise baseline."""
    from .report import write_json, write_report

    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for case in cases:
        c = case.scaled(scale)
        train_seed, test_seed = case_seeds(seed, c.case_id)
        cdir = outdir / c.case_id
        cdir.mkdir(exist_ok=True)
        train = simulate_dataset(c.spec, c.train_size, c.series_len, train_seed)
        test = simulate_dataset(c.spec, c.test_size, c.series_len, test_seed)
        write_dataset(train, cdir / "train.nbts")
        write_dataset(test, cdir / "test.nbts")
        n = min(c.test_size, c.train_size)
        baseline = type(train)(train.values[:n], train.spec, train.master_seed, train.provenance,
                               {**train.params, "n_series": n})
        report = evaluate(test, baseline, c.spec, cfg, case_id=c.case_id)
        write_report(report, cdir / "report.json", figures=figures)
        row = {"case_id": c.case_id, "model": c.spec.kind, "train_size": c.train_size, "test_size": c.test_size,
               "train_seed": train_seed, "test_seed": test_seed, "geodesic_distance": report.geodesic_distance}
        for name, truth in report.true_params.items():
            s = report.target_param_summary[name]
            row[f"{name}_true"] = truth
            row[f"{name}_target_median"] = s.median if s else None
            row[f"{name}_target_failures"] = report.target_estimates.failures
        rows.append(row)
        if not quiet:
            print(f"{c.case_id}\td_g={report.geodesic_distance:.5f}", file=sys.stderr)

    write_json({"tool": "noisebench", "tool_version": __version__, "scale": scale, "seed": seed, "cases": rows},
               outdir / "summary.json")
    keys = ["case_id", "model", "train_size", "test_size", "train_seed", "test_seed", "geodesic_distance"]
    with open(outdir / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([r[k] for k in keys])
    return 0


# --- entry point --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="noisebench", description="Synthetic noise benchmark toolkit.")
    ap.add_argument("--version", action="version", version=f"noisebench {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True)

    models = ", ".join(sorted(SPEC_TYPES))
    p = sub.add_parser("generate", help="simulate a target dataset",
                       description=f"Simulate a dataset. Models: {models}. Model parameters follow as --name value.")
    p.add_argument("--model", required=True, choices=sorted(SPEC_TYPES))
    p.add_argument("--num", type=int, required=True)
    p.add_argument("--len", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dtype", choices=["float64", "float32"], default="float64")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="score a generated dataset against a target dataset")
    p.add_argument("--target", required=True)
    p.add_argument("--generated", required=True)
    p.add_argument("--report", required=True, help="JSON report path; CSV and PNG files are written beside it")
    p.add_argument("--model", choices=sorted(SPEC_TYPES), help="override the model recorded with the target")
    p.add_argument("--case-id", default="")
    p.add_argument("--no-figures", action="store_true")
    _add_mt_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("estimate", help="per-series parameter estimates of a dataset")
    p.add_argument("--model", choices=sorted(SPEC_TYPES))
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", help="optional CSV of per-series estimates")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("psd", help="median multitaper PSD of a dataset as CSV")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    _add_mt_args(p)
    p.set_defaults(func=cmd_psd)

    p = sub.add_parser("suite", help="list or run the built-in benchmark cases")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--list", action="store_true")
    mode.add_argument("--run", action="store_true")
    p.add_argument("--outdir")
    p.add_argument("--scale", type=float, default=1.0, help="fraction of the full dataset sizes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", help="comma-separated subset of case ids")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--quiet", action="store_true")
    _add_mt_args(p)
    p.set_defaults(func=cmd_suite)
    return ap


def _fail(category: str, message: str, code: int = EXIT_ERROR) -> int:
    print(json.dumps({"error": category, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    if extra and args.verb not in ("generate", "evaluate", "estimate"):
        return _fail("usage", f"unrecognized arguments: {' '.join(extra)}", EXIT_USAGE)
    try:
        return args.func(args, extra)
    except NoiseBenchError as exc:
        return _fail(exc.category, str(exc))
    except FileNotFoundError as exc:
        return _fail("file-not-found", str(exc))
    except OSError as exc:
        return _fail("io", str(exc))
    except TypeError as exc:
        # a model parameter of the wrong kind, e.g. a string where a number belongs
        return _fail("invalid-parameter", str(exc))


if __name__ == "__main__":
    sys.exit(main())
