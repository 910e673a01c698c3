"""Tests for the limit-process sampler, quantile estimation and the band."""

import numpy as np
import pytest
from scipy.stats import norm

from stackpmf import (
    InvalidPmfError,
    band,
    builtin_models,
    confidence_band,
    iter_limit_process,
    pmf_truncate,
    quantile_q_alpha,
    sample_sup_norm,
)


class TestSampler:
    def test_point_mass_is_degenerate(self):
        draws = sample_sup_norm(np.array([1.0]), 500, seed=1)
        assert np.all(draws == 0.0)

    def test_two_point_distribution_matches_closed_form(self):
        # with theta = (1/2, 1/2) the two coordinates are opposite and the
        # sup norm is |N(0, 1/4)|
        draws = sample_sup_norm(np.array([0.5, 0.5]), 200_000, seed=2)
        grid = np.array([0.2, 0.5, 1.0])
        for t in grid:
            target = 2 * norm.cdf(t / 0.5) - 1
            assert np.mean(draws <= t) == pytest.approx(target, abs=5e-3)

    def test_covariance_matches_target(self):
        theta = pmf_truncate(builtin_models()["M1"], 1e-12).probs
        target = np.diag(theta) - np.outer(theta, theta)
        acc = np.zeros((theta.size, theta.size))
        total = 0
        for y in iter_limit_process(theta, 300_000, seed=3):
            acc += y.T @ y
            total += y.shape[0]
        assert np.max(np.abs(acc / total - target)) <= 5e-3

    def test_rejects_non_pmf(self):
        with pytest.raises(InvalidPmfError):
            sample_sup_norm(np.array([0.5, 0.2]), 100, seed=1)
        with pytest.raises(InvalidPmfError):
            sample_sup_norm(np.array([-0.2, 1.2]), 100, seed=1)

    def test_deterministic_given_seed(self):
        theta = np.array([0.3, 0.3, 0.4])
        a = sample_sup_norm(theta, 5000, seed=11)
        b = sample_sup_norm(theta, 5000, seed=11)
        np.testing.assert_array_equal(a, b)


class TestQuantile:
    def test_degenerate(self):
        assert quantile_q_alpha(np.array([1.0]), 0.05, 1000, seed=1) == 0.0

    def test_two_point_closed_form(self):
        q = quantile_q_alpha(np.array([0.5, 0.5]), 0.05, 10**6, seed=4)
        assert q == pytest.approx(0.5 * norm.ppf(0.975), abs=5e-3)

    def test_reproducible(self):
        theta = pmf_truncate(builtin_models()["M1"], 1e-12).probs
        a = quantile_q_alpha(theta, 0.05, 20_000, seed=5)
        b = quantile_q_alpha(theta, 0.05, 20_000, seed=5)
        assert a == b

    def test_monotone_in_alpha(self):
        theta = np.array([0.25, 0.25, 0.25, 0.25])
        qs = [quantile_q_alpha(theta, alpha, 50_000, seed=6) for alpha in (0.01, 0.05, 0.2, 0.5)]
        assert all(qs[i] >= qs[i + 1] for i in range(len(qs) - 1))

    def test_stable_under_tiny_theta_perturbation(self):
        theta = pmf_truncate(builtin_models()["M2"], 1e-12).probs
        bumped = theta.copy()
        bumped[0] += 5e-7
        bumped[1] -= 5e-7
        a = quantile_q_alpha(theta, 0.05, 100_000, seed=7)
        b = quantile_q_alpha(bumped, 0.05, 100_000, seed=7)
        assert abs(a - b) <= 1e-3

    def test_requires_enough_draws(self):
        with pytest.raises(ValueError):
            quantile_q_alpha(np.array([0.5, 0.5]), 0.05, 10, seed=1)


class TestBand:
    def test_arithmetic(self):
        cb = band(np.array([0.5, 0.5]), 100, 0.1)
        np.testing.assert_allclose(cb.lower, [0.49, 0.49])
        np.testing.assert_allclose(cb.upper, [0.51, 0.51])

    def test_clamps_below_only(self):
        cb = band(np.array([0.01, 0.99]), 100, 0.5)
        np.testing.assert_allclose(cb.lower, [0.0, 0.94])
        np.testing.assert_allclose(cb.upper, [0.06, 1.04])

    def test_zero_quantile_collapses(self):
        cb = band(np.array([0.3, 0.7]), 25, 0.0)
        np.testing.assert_allclose(cb.lower, cb.upper)

    def test_width_bound_and_order(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            c = rng.dirichlet(np.ones(6))
            q = float(rng.uniform(0.0, 2.0))
            n = int(rng.integers(1, 10_000))
            cb = band(c, n, q)
            assert np.all(cb.lower <= cb.upper)
            assert np.all(cb.lower >= 0.0)
            assert np.all(cb.upper - cb.lower <= 2 * q / np.sqrt(n) + 1e-15)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            band(np.array([0.5, 0.5]), 100, -0.1)
        with pytest.raises(ValueError):
            band(np.array([0.5, 0.5]), 0, 0.1)
        with pytest.raises(ValueError):
            quantile_q_alpha(np.array([0.5, 0.5]), 1.5, 1000, seed=1)
        with pytest.raises(ValueError):
            sample_sup_norm(np.array([0.5, 0.5]), 0, seed=1)

    def test_one_shot_helper_matches_two_steps(self):
        theta = pmf_truncate(builtin_models()["M1"], 1e-12)
        q = quantile_q_alpha(theta, 0.1, 20_000, seed=9)
        two_step = band(theta, 400, q)
        one_shot = confidence_band(theta, 400, 0.1, 20_000, seed=9)
        assert one_shot.q_hat == two_step.q_hat
        np.testing.assert_array_equal(one_shot.lower, two_step.lower)
        np.testing.assert_array_equal(one_shot.upper, two_step.upper)
