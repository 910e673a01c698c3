"""Monte-Carlo experiment drivers.

Four experiment types over a chosen true distribution: per-replication
estimation losses (boxplot data), scaled-risk curves over a sample-size
grid, empirical coverage of the global confidence bands, and samples for
normal QQ diagnostics of a single coordinate. A separate driver times the
worst-case inputs of the mixture-weight and quantile computations.

Replication i always draws from the stream ``(seed, "rep", ...)`` and its
band Monte Carlo from ``(seed, "band", i)``, so results are identical for
any worker count, with single-threaded and pooled runs byte-equal.
"""

import math
import multiprocessing
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm as _norm

from . import estimators as est
from .confidence import band, quantile_q_alpha
from .models import FrequencyData, ModelSpec, TriangularDecreasing, pmf_truncate, sample
from .rng import substream_seed

ESTIMATOR_CODES = ("e", "mm", "r", "G", "sr", "sG")

#: Truth vectors are materialized with this tail tolerance.
TRUTH_TRUNCATION = 1e-12


def fit_estimator(code: str, x) -> np.ndarray:
    """Probability vector of the estimator named by ``code`` on data ``x``."""
    if code == "e":
        return est.empirical(x).probs
    if code == "mm":
        return est.minimax(x).probs
    if code == "r":
        return est.rearrangement(x).probs
    if code == "G":
        return est.grenander(x).probs
    if code == "sr":
        return est.stacked(x, est.REARRANGEMENT).estimate.probs
    if code == "sG":
        return est.stacked(x, est.GRENANDER).estimate.probs
    raise ValueError(f"unknown estimator code {code!r}; choose from {ESTIMATOR_CODES}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings shared by the experiment drivers.

    ``n`` is the sample size for single-size experiments, ``n_grid`` the
    grid for risk curves (exactly one of the two is used per driver).
    ``estimators`` are codes from ``ESTIMATOR_CODES``; ``norms`` may contain
    1, 2 and ``math.inf``.
    """

    model: ModelSpec
    reps: int
    estimators: tuple = ("e", "sG")
    norms: tuple = (1, 2, math.inf)
    n: int | None = None
    n_grid: tuple = ()
    alpha: float = 0.05
    band_mc_reps: int = 100_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError(f"need at least one replication, got {self.reps}")
        for code in self.estimators:
            if code not in ESTIMATOR_CODES:
                raise ValueError(f"unknown estimator code {code!r}")
        if not self.estimators:
            raise ValueError("select at least one estimator")
        for k in self.norms:
            if k not in (1, 2, math.inf):
                raise ValueError(f"norms must be 1, 2 or inf, got {k!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")


@dataclass
class ExperimentResult:
    """Outputs of one driver run; fields not produced by a driver stay None.

    ``per_rep_losses`` has shape (reps, len(estimators), len(norms));
    ``risk_estimates`` and ``risk_se`` have shape (len(n_grid),
    len(estimators)); coverage and QQ results are keyed by estimator code.
    Scaled risk is ``n * mean(squared l2 loss)``.
    """

    config: ExperimentConfig
    per_rep_losses: np.ndarray | None = None
    risk_estimates: np.ndarray | None = None
    risk_se: np.ndarray | None = None
    coverage: dict = field(default_factory=dict)
    coverage_se: dict = field(default_factory=dict)
    qq_samples: dict = field(default_factory=dict)
    qq_theoretical: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)


def _map_ordered(fn, payloads, workers: int):
    if workers <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    ctx = multiprocessing.get_context("fork")
    chunksize = max(1, len(payloads) // (workers * 8))
    with ctx.Pool(workers) as pool:
        return pool.map(fn, payloads, chunksize=chunksize)


# ---------------------------------------------------------------------------
# Per-replication workers (top level so they pickle for worker pools)


def _loss_rep(payload):
    model, n, rep_seed, codes, norms, truth = payload
    x = sample(model, n, rep_seed)
    row = np.empty((len(codes), len(norms)))
    for a, code in enumerate(codes):
        probs = fit_estimator(code, x)
        for b, k in enumerate(norms):
            row[a, b] = est.lk_distance(probs, truth, k)
    return row


def _coverage_rep(payload):
    model, n, rep_seed, band_seed, codes, alpha, band_mc_reps, truth = payload
    x = sample(model, n, rep_seed)
    hits = np.empty(len(codes), dtype=bool)
    for a, code in enumerate(codes):
        center = fit_estimator(code, x)
        q_hat = quantile_q_alpha(center, alpha, band_mc_reps, band_seed)
        padded = np.zeros(max(center.size, truth.size))
        padded[: center.size] = center
        b = band(padded, n, q_hat)
        hits[a] = bool(
            np.all(b.lower[: truth.size] <= truth) and np.all(truth <= b.upper[: truth.size])
        )
    return hits


def _qq_rep(payload):
    model, n, rep_seed, codes, coord, p_coord = payload
    x = sample(model, n, rep_seed)
    row = np.empty(len(codes))
    root_n = math.sqrt(n)
    for a, code in enumerate(codes):
        probs = fit_estimator(code, x)
        value = probs[coord] if coord < probs.size else 0.0
        row[a] = root_n * (value - p_coord)
    return row


# ---------------------------------------------------------------------------
# Drivers


def run_loss_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Estimation losses per replication at a single sample size."""
    if cfg.n is None:
        raise ValueError("loss experiments need a single sample size n")
    truth = pmf_truncate(cfg.model, TRUTH_TRUNCATION).probs
    payloads = [
        (cfg.model, cfg.n, substream_seed(cfg.seed, "rep", i), cfg.estimators, cfg.norms, truth)
        for i in range(cfg.reps)
    ]
    rows = _map_ordered(_loss_rep, payloads, cfg.workers)
    return ExperimentResult(config=cfg, per_rep_losses=np.stack(rows))


def run_risk_curve(cfg: ExperimentConfig) -> ExperimentResult:
    """Scaled risk ``n * E[squared l2 loss]`` over the sample-size grid."""
    if not cfg.n_grid:
        raise ValueError("risk curves need a nonempty n_grid")
    truth = pmf_truncate(cfg.model, TRUTH_TRUNCATION).probs
    risks = np.empty((len(cfg.n_grid), len(cfg.estimators)))
    ses = np.empty_like(risks)
    for g, n in enumerate(cfg.n_grid):
        payloads = [
            (cfg.model, n, substream_seed(cfg.seed, "rep", g, i), cfg.estimators, (2,), truth)
            for i in range(cfg.reps)
        ]
        rows = _map_ordered(_loss_rep, payloads, cfg.workers)
        sq = np.stack(rows)[:, :, 0] ** 2
        risks[g] = n * sq.mean(axis=0)
        ses[g] = n * sq.std(axis=0, ddof=1) / math.sqrt(cfg.reps) if cfg.reps > 1 else 0.0
    return ExperimentResult(config=cfg, risk_estimates=risks, risk_se=ses)


def run_coverage(cfg: ExperimentConfig) -> ExperimentResult:
    """Proportion of replications whose band contains the whole truth vector.

    Each replication re-estimates the sup-norm quantile from its own fitted
    vector (the empirical estimator plugs in itself). Containment is checked
    on every index of the truncated truth; indices past the observed range
    carry the band ``[0, q_hat / sqrt(n)]`` around a zero center.
    """
    if cfg.n is None:
        raise ValueError("coverage experiments need a single sample size n")
    truth = pmf_truncate(cfg.model, TRUTH_TRUNCATION).probs
    payloads = [
        (
            cfg.model,
            cfg.n,
            substream_seed(cfg.seed, "rep", i),
            substream_seed(cfg.seed, "band", i),
            cfg.estimators,
            cfg.alpha,
            cfg.band_mc_reps,
            truth,
        )
        for i in range(cfg.reps)
    ]
    rows = np.stack(_map_ordered(_coverage_rep, payloads, cfg.workers))
    result = ExperimentResult(config=cfg)
    for a, code in enumerate(cfg.estimators):
        p = float(rows[:, a].mean())
        result.coverage[code] = p
        result.coverage_se[code] = math.sqrt(p * (1.0 - p) / cfg.reps)
    return result


def run_qq_samples(cfg: ExperimentConfig, coord: int) -> ExperimentResult:
    """Samples of ``sqrt(n) * (estimate_coord - p_coord)`` per estimator,
    with normal quantiles scaled by the sample standard deviation."""
    if cfg.n is None:
        raise ValueError("QQ sampling needs a single sample size n")
    truth = pmf_truncate(cfg.model, TRUTH_TRUNCATION).probs
    if not 0 <= coord < truth.size:
        raise ValueError(f"coordinate {coord} outside the truth support of length {truth.size}")
    payloads = [
        (cfg.model, cfg.n, substream_seed(cfg.seed, "rep", i), cfg.estimators, coord, float(truth[coord]))
        for i in range(cfg.reps)
    ]
    rows = np.stack(_map_ordered(_qq_rep, payloads, cfg.workers))
    result = ExperimentResult(config=cfg)
    positions = (np.arange(cfg.reps) + 0.5) / cfg.reps
    normal_q = _norm.ppf(positions)
    for a, code in enumerate(cfg.estimators):
        samples = rows[:, a]
        result.qq_samples[code] = samples
        sd = float(samples.std(ddof=1)) if cfg.reps > 1 else 0.0
        result.qq_theoretical[code] = sd * normal_q
    return result


def worst_case_timing(s_grid, runs: int, alpha: float = 0.05, mc_reps: int = 100_000, seed: int = 0) -> dict:
    """Wall times on the strictly increasing counts vector ``x_j = j + 1``.

    For each ``s``: the mixture-weight computation for both stacked kinds,
    the fast leave-one-out pass for both kinds, and the sup-norm quantile
    with a strictly decreasing triangular plug-in of the same size. Times
    are means over ``runs``.
    """
    timings = {}
    for s in s_grid:
        if s < 1:
            raise ValueError(f"s must be at least 1, got {s}")
        x = FrequencyData(np.arange(1, s + 2))
        theta = pmf_truncate(TriangularDecreasing(int(s)), TRUTH_TRUNCATION)
        entry = {}
        for label, fn in (
            ("cv_beta_sr", lambda: est.cv_beta(x, est.REARRANGEMENT)),
            ("cv_beta_sg", lambda: est.cv_beta(x, est.GRENANDER)),
            ("loo_fast_r", lambda: est.loo_vectors_fast(x, est.REARRANGEMENT)),
            ("loo_fast_g", lambda: est.loo_vectors_fast(x, est.GRENANDER)),
            ("quantile", lambda: quantile_q_alpha(theta, alpha, mc_reps, seed)),
        ):
            total = 0.0
            for _ in range(runs):
                start = time.perf_counter()
                fn()
                total += time.perf_counter() - start
            entry[label] = total / runs
        timings[int(s)] = entry
    return timings
