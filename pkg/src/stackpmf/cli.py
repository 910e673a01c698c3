"""Command-line interface.

Subcommands: ``estimate`` (fit one estimator to a counts file), ``simulate``
(loss, risk or coverage experiments), ``band`` (global confidence band),
``qq`` (normal QQ samples) and ``bench`` (worst-case timings). Every run
writes its data files plus a manifest recording the resolved arguments, so
rerunning the manifest's argv reproduces the files byte for byte.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.
"""

import argparse
import csv
import json
import math
import os
import platform
import sys

import numpy as np

from . import __version__
from ._svg import boxplot_svg, linechart_svg
from .confidence import band as make_band
from .confidence import quantile_q_alpha
from .errors import EmptyInputError, InsufficientSampleError, InvalidPmfError, ParameterError
from .estimators import stacked
from .harness import (
    ESTIMATOR_CODES,
    ExperimentConfig,
    fit_estimator,
    run_coverage,
    run_loss_experiment,
    run_qq_samples,
    run_risk_curve,
    worst_case_timing,
)
from .models import FrequencyData, parse_model

SEED_ENV_VAR = "STACKPMF_SEED"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class CountsParseError(ValueError):
    """A counts file failed to parse; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class _UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Input parsing


def read_counts(path: str) -> tuple[np.ndarray, list[str]]:
    """Read whitespace- or newline-separated nonnegative integer counts.

    Index equals position. Leading zeros are kept; trailing zeros are
    stripped with a warning because the vector length encodes the largest
    observed value.
    """
    values: list[int] = []
    warnings: list[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CountsParseError(f"cannot read {path}: {exc.strerror}", line=0) from exc
    for lineno, line in enumerate(lines, start=1):
        for token in line.split():
            try:
                value = int(token)
            except ValueError:
                raise CountsParseError(f"not an integer count: {token!r}", line=lineno) from None
            if value < 0:
                raise CountsParseError(f"negative count: {token!r}", line=lineno)
            values.append(value)
    if not values:
        raise CountsParseError("no counts found", line=len(lines))
    trimmed = len(values)
    while trimmed > 0 and values[trimmed - 1] == 0:
        trimmed -= 1
    if trimmed == 0:
        raise CountsParseError("all counts are zero", line=len(lines))
    if trimmed < len(values):
        warnings.append(f"stripped {len(values) - trimmed} trailing zero count(s)")
    return np.asarray(values[:trimmed], dtype=np.int64), warnings


def _parse_codes(text: str) -> tuple[str, ...]:
    codes = tuple(c.strip() for c in text.split(",") if c.strip())
    for code in codes:
        if code not in ESTIMATOR_CODES:
            raise _UsageError(f"unknown estimator code {code!r}; choose from {','.join(ESTIMATOR_CODES)}")
    if not codes:
        raise _UsageError("select at least one estimator")
    return codes


def _parse_norms(text: str) -> tuple:
    out = []
    for part in text.split(","):
        part = part.strip()
        if part == "inf":
            out.append(math.inf)
        elif part in ("1", "2"):
            out.append(int(part))
        else:
            raise _UsageError(f"norms must be from 1,2,inf, got {part!r}")
    if not out:
        raise _UsageError("select at least one norm")
    return tuple(out)


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise _UsageError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise _UsageError("expected at least one integer")
    return values


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _UsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    return 0


# ---------------------------------------------------------------------------
# Output writing


def _fmt_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str, header: list[str], rows: list[list], comments: list[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for comment in comments:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_table(args, name: str, header: list[str], rows: list[list], comments: list[str] = ()) -> str:
    if getattr(args, "format", "csv") == "json":
        path = os.path.join(args.out, f"{name}.json")
        _write_json(path, {"comments": list(comments), "columns": header, "rows": rows})
    else:
        path = os.path.join(args.out, f"{name}.csv")
        _write_csv(path, header, rows, comments)
    return path


def _write_manifest(args, command: str, argv: list[str], config: dict, artifacts: list[str]) -> str:
    path = os.path.join(args.out, f"{command}.manifest.json")
    _write_json(
        path,
        {
            "command": command,
            "argv": argv,
            "config": config,
            "artifacts": [os.path.basename(a) for a in artifacts],
            "version": __version__,
            "seed": config.get("seed"),
        },
    )
    return path


def _jsonable(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    return value


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_estimate(args) -> int:
    seed = _resolve_seed(args)
    counts, warnings = read_counts(args.input)
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)
    x = FrequencyData(counts)
    payload = {
        "kind": args.kind,
        "n": x.n,
        "t_n": x.t_n,
        "warnings": warnings,
    }
    if args.kind in ("sr", "sG"):
        fit = stacked(x, "rearrangement" if args.kind == "sr" else "grenander")
        estimate = fit.estimate.probs
        payload["beta_hat"] = fit.beta_hat
        payload["a_n"] = fit.a_n
        payload["b_n"] = fit.b_n
        if fit.diagnostics:
            payload["diagnostics"] = fit.diagnostics
    else:
        estimate = fit_estimator(args.kind, x)
    payload["estimate"] = [float(v) for v in estimate]
    if args.band is not None:
        if not 0.0 < args.band < 1.0:
            raise _UsageError(f"--band alpha must lie in (0, 1), got {args.band!r}")
        q_hat = quantile_q_alpha(estimate, args.band, args.mc, seed)
        cb = make_band(estimate, x.n, q_hat, alpha=args.band, mc_reps=args.mc, seed=seed)
        payload["band"] = {
            "alpha": args.band,
            "q_hat": cb.q_hat,
            "mc_reps": args.mc,
            "seed": seed,
            "lower": [float(v) for v in cb.lower],
            "upper": [float(v) for v in cb.upper],
        }
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, "estimate.json")
    _write_json(out_path, payload)
    argv = ["estimate", "--input", args.input, "--kind", args.kind, "--seed", str(seed), "--out", args.out]
    if args.band is not None:
        argv += ["--band", repr(args.band), "--mc", str(args.mc)]
    _write_manifest(args, "estimate", argv, {"kind": args.kind, "seed": seed, "n": x.n}, [out_path])
    return EXIT_OK


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    model = parse_model(args.model)
    codes = _parse_codes(args.est)
    norms = _parse_norms(args.norm)
    modes = [m for m, on in (("risk", args.risk), ("coverage", args.coverage)) if on]
    if len(modes) > 1:
        raise _UsageError("choose at most one of --risk and --coverage")
    mode = modes[0] if modes else "loss"
    os.makedirs(args.out, exist_ok=True)
    artifacts = []
    argv = ["simulate", "--model", args.model, "--reps", str(args.reps), "--est", ",".join(codes),
            "--norm", args.norm, "--seed", str(seed), "--workers", str(args.workers),
            "--format", args.format, "--out", args.out]
    if mode == "risk":
        if args.ngrid is None:
            raise _UsageError("--risk needs --ngrid")
        n_grid = _parse_int_list(args.ngrid)
        cfg = ExperimentConfig(model=model, reps=args.reps, estimators=codes, norms=norms,
                               n_grid=n_grid, seed=seed, workers=args.workers)
        res = run_risk_curve(cfg)
        rows = []
        for g, n in enumerate(n_grid):
            for a, code in enumerate(codes):
                rows.append([n, code, args.reps, float(res.risk_estimates[g, a]), float(res.risk_se[g, a])])
        artifacts.append(_write_table(args, "risk", ["n", "estimator", "reps", "risk", "se"], rows))
        argv += ["--risk", "--ngrid", args.ngrid]
        if args.svg:
            series = [(code, [float(res.risk_estimates[g, a]) for g in range(len(n_grid))])
                      for a, code in enumerate(codes)]
            svg_path = os.path.join(args.out, "risk.svg")
            with open(svg_path, "w", encoding="utf-8") as fh:
                fh.write(linechart_svg([float(n) for n in n_grid], series))
            artifacts.append(svg_path)
    elif mode == "coverage":
        if args.n is None:
            raise _UsageError("--coverage needs --n")
        cfg = ExperimentConfig(model=model, reps=args.reps, estimators=codes, norms=norms, n=args.n,
                               alpha=args.alpha, band_mc_reps=args.bandmc, seed=seed, workers=args.workers)
        res = run_coverage(cfg)
        rows = [[code, args.model, args.n, repr(args.alpha), args.reps, args.bandmc,
                 float(res.coverage[code]), float(res.coverage_se[code])] for code in codes]
        artifacts.append(_write_table(
            args, "coverage",
            ["estimator", "model", "n", "alpha", "reps", "band_mc_reps", "coverage", "se"], rows))
        argv += ["--coverage", "--n", str(args.n), "--alpha", repr(args.alpha), "--bandmc", str(args.bandmc)]
    else:
        if args.n is None:
            raise _UsageError("loss simulation needs --n")
        cfg = ExperimentConfig(model=model, reps=args.reps, estimators=codes, norms=norms,
                               n=args.n, seed=seed, workers=args.workers)
        res = run_loss_experiment(cfg)
        norm_names = ["inf" if k == math.inf else str(k) for k in norms]
        rows = []
        for i in range(args.reps):
            for a, code in enumerate(codes):
                for b, norm_name in enumerate(norm_names):
                    rows.append([i, code, norm_name, float(res.per_rep_losses[i, a, b])])
        artifacts.append(_write_table(args, "losses", ["rep", "estimator", "norm", "loss"], rows))
        argv += ["--n", str(args.n)]
        if args.svg:
            first_norm = 0
            groups = [(code, [float(v) for v in res.per_rep_losses[:, a, first_norm]])
                      for a, code in enumerate(codes)]
            svg_path = os.path.join(args.out, "losses.svg")
            with open(svg_path, "w", encoding="utf-8") as fh:
                fh.write(boxplot_svg(groups))
            artifacts.append(svg_path)
    if args.svg:
        argv += ["--svg"]
    config = {"model": args.model, "mode": mode, "reps": args.reps, "estimators": list(codes),
              "norms": [_jsonable(k) for k in norms], "n": args.n,
              "ngrid": args.ngrid, "alpha": args.alpha, "band_mc_reps": args.bandmc,
              "seed": seed, "workers": args.workers}
    _write_manifest(args, "simulate", argv, config, artifacts)
    return EXIT_OK


def _cmd_band(args) -> int:
    seed = _resolve_seed(args)
    if (args.input is None) == (args.theta is None):
        raise _UsageError("give exactly one of --input (counts) or --theta (estimate json)")
    if args.input is not None:
        counts, warnings = read_counts(args.input)
        for message in warnings:
            print(f"warning: {message}", file=sys.stderr)
        x = FrequencyData(counts)
        center = fit_estimator(args.kind, x)
        n = x.n
        source = {"input": args.input, "kind": args.kind}
        argv = ["band", "--input", args.input, "--kind", args.kind]
    else:
        try:
            with open(args.theta, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
            center = np.asarray(payload["estimate"], dtype=float)
            n = int(payload["n"])
        except (OSError, KeyError, ValueError, TypeError) as exc:
            raise CountsParseError(f"cannot read estimate json {args.theta}: {exc}", line=0) from exc
        source = {"theta": args.theta}
        argv = ["band", "--theta", args.theta]
    q_hat = quantile_q_alpha(center, args.alpha, args.mc, seed)
    cb = make_band(center, n, q_hat, alpha=args.alpha, mc_reps=args.mc, seed=seed)
    os.makedirs(args.out, exist_ok=True)
    rows = [[j, float(cb.lower[j]), float(cb.upper[j])] for j in range(len(cb.lower))]
    comments = [f"q_hat={cb.q_hat!r} alpha={args.alpha!r} n={n} mc_reps={args.mc} seed={seed}"]
    path = _write_table(args, "band", ["j", "lower", "upper"], rows, comments)
    argv += ["--alpha", repr(args.alpha), "--mc", str(args.mc), "--seed", str(seed),
             "--format", args.format, "--out", args.out]
    config = {"alpha": args.alpha, "mc_reps": args.mc, "seed": seed, "n": n, "q_hat": cb.q_hat, **source}
    _write_manifest(args, "band", argv, config, [path])
    return EXIT_OK


def _cmd_qq(args) -> int:
    seed = _resolve_seed(args)
    model = parse_model(args.model)
    codes = _parse_codes(args.est)
    cfg = ExperimentConfig(model=model, reps=args.reps, estimators=codes, n=args.n,
                           seed=seed, workers=args.workers)
    res = run_qq_samples(cfg, args.coord)
    header = ["rank"]
    columns = []
    for code in codes:
        header += [f"sample_{code}", f"theoretical_{code}"]
        columns.append((np.sort(res.qq_samples[code]), res.qq_theoretical[code]))
    rows = []
    for i in range(args.reps):
        row = [i]
        for sample_col, theo_col in columns:
            row += [float(sample_col[i]), float(theo_col[i])]
        rows.append(row)
    os.makedirs(args.out, exist_ok=True)
    path = _write_table(args, "qq", header, rows)
    argv = ["qq", "--model", args.model, "--coord", str(args.coord), "--n", str(args.n),
            "--reps", str(args.reps), "--est", ",".join(codes), "--seed", str(seed),
            "--workers", str(args.workers), "--format", args.format, "--out", args.out]
    config = {"model": args.model, "coord": args.coord, "n": args.n, "reps": args.reps,
              "estimators": list(codes), "seed": seed, "workers": args.workers}
    _write_manifest(args, "qq", argv, config, [path])
    return EXIT_OK


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args)
    s_grid = _parse_int_list(args.sgrid)
    timings = worst_case_timing(s_grid, args.runs, mc_reps=args.mc, seed=seed)
    rows = []
    for s in s_grid:
        entry = timings[s]
        rows.append([s, args.runs, entry["cv_beta_sr"], entry["cv_beta_sg"],
                     entry["loo_fast_r"], entry["loo_fast_g"], entry["quantile"]])
    os.makedirs(args.out, exist_ok=True)
    path = _write_table(
        args, "bench",
        ["s", "runs", "cv_beta_sr_s", "cv_beta_sg_s", "loo_fast_r_s", "loo_fast_g_s", "quantile_s"],
        rows)
    argv = ["bench", "--sgrid", args.sgrid, "--runs", str(args.runs), "--mc", str(args.mc),
            "--seed", str(seed), "--format", args.format, "--out", args.out]
    config = {"sgrid": list(s_grid), "runs": args.runs, "mc_reps": args.mc, "seed": seed,
              "machine": platform.platform(), "python": platform.python_version(),
              "numpy": np.__version__}
    _write_manifest(args, "bench", argv, config, [path])
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser and entry point


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help=f"random seed (fallback: ${SEED_ENV_VAR}, then 0)")
    parser.add_argument("--workers", type=int, default=1, help="worker processes for replications")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv", help="table output format")
    parser.add_argument("--svg", action="store_true", help="also write a minimal SVG chart")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stackpmf",
                                     description="Stacked shape-constrained estimation of a discrete pmf")
    parser.add_argument("--version", action="version", version=f"stackpmf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="fit one estimator to a counts file")
    p.add_argument("--input", required=True, help="counts file (whitespace-separated integers)")
    p.add_argument("--kind", required=True, choices=ESTIMATOR_CODES, help="estimator code")
    p.add_argument("--band", type=float, default=None, metavar="ALPHA",
                   help="also compute a global confidence band at this level")
    p.add_argument("--mc", type=int, default=100_000, help="Monte-Carlo draws for the band quantile")
    _add_common(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("simulate", help="loss, risk or coverage experiments")
    p.add_argument("--model", required=True, help="model string (M1..M7 or e.g. geom:0.25)")
    p.add_argument("--n", type=int, default=None, help="sample size")
    p.add_argument("--ngrid", default=None, help="comma-separated sample sizes (risk mode)")
    p.add_argument("--reps", type=int, required=True, help="Monte-Carlo replications")
    p.add_argument("--est", default="e,sG", help="comma-separated estimator codes")
    p.add_argument("--norm", default="1,2,inf", help="comma-separated norms from 1,2,inf")
    p.add_argument("--risk", action="store_true", help="scaled-risk curve over --ngrid")
    p.add_argument("--coverage", action="store_true", help="confidence-band coverage at --n")
    p.add_argument("--alpha", type=float, default=0.05, help="band level for coverage mode")
    p.add_argument("--bandmc", type=int, default=100_000, help="band quantile draws for coverage mode")
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("band", help="global confidence band for a counts file or saved estimate")
    p.add_argument("--input", default=None, help="counts file; the estimator is fit here")
    p.add_argument("--kind", default="sG", choices=ESTIMATOR_CODES,
                   help="estimator to fit when --input is given")
    p.add_argument("--theta", default=None, help="estimate.json file to reuse as the band center")
    p.add_argument("--alpha", type=float, required=True, help="band level")
    p.add_argument("--mc", type=int, default=100_000, help="Monte-Carlo draws for the quantile")
    _add_common(p)
    p.set_defaults(func=_cmd_band)

    p = sub.add_parser("qq", help="normal QQ samples of one coordinate")
    p.add_argument("--model", required=True, help="model string")
    p.add_argument("--coord", type=int, required=True, help="coordinate under study")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--reps", type=int, required=True, help="Monte-Carlo replications")
    p.add_argument("--est", default="e,sG", help="comma-separated estimator codes")
    _add_common(p)
    p.set_defaults(func=_cmd_qq)

    p = sub.add_parser("bench", help="worst-case timings of the core computations")
    p.add_argument("--sgrid", required=True, help="comma-separated support sizes")
    p.add_argument("--runs", type=int, default=10, help="runs to average over")
    p.add_argument("--mc", type=int, default=100_000, help="quantile draws per run")
    _add_common(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CountsParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ParameterError, InvalidPmfError, EmptyInputError, InsufficientSampleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # model strings and flag combinations surface as plain ValueError
        message = str(exc)
        if "model string" in message:
            print(f"error: {message}", file=sys.stderr)
            return EXIT_USAGE
        print(f"error: {message}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
