"""Tests for the point estimators, leave-one-out machinery and mixture weight."""

import math

import numpy as np
import pytest

from oracles import random_frequency_data
from stackpmf import (
    GRENANDER,
    KINDS,
    REARRANGEMENT,
    FrequencyData,
    InsufficientSampleError,
    cv_beta,
    empirical,
    grenander,
    lk_distance,
    loo_vectors,
    loo_vectors_fast,
    minimax,
    rearrangement,
    sample,
    stacked,
)
from stackpmf.models import Geometric, UniformRange


def fd(*counts) -> FrequencyData:
    return FrequencyData(np.asarray(counts, dtype=np.int64))


class TestPlainEstimators:
    def test_empirical(self):
        np.testing.assert_allclose(empirical(fd(2, 1, 1)).probs, [0.5, 0.25, 0.25])
        np.testing.assert_allclose(empirical(fd(5)).probs, [1.0])
        np.testing.assert_allclose(empirical(fd(1, 2)).probs, [1 / 3, 2 / 3])

    def test_rearrangement(self):
        np.testing.assert_allclose(rearrangement(fd(1, 2)).probs, [2 / 3, 1 / 3])
        np.testing.assert_allclose(rearrangement(fd(2, 2)).probs, [0.5, 0.5])
        np.testing.assert_allclose(rearrangement(fd(1, 3, 2)).probs, [0.5, 1 / 3, 1 / 6])

    def test_grenander(self):
        np.testing.assert_allclose(grenander(fd(3, 2, 1)).probs, [0.5, 1 / 3, 1 / 6])
        np.testing.assert_allclose(grenander(fd(1, 3, 2)).probs, [1 / 3, 1 / 3, 1 / 3])
        np.testing.assert_allclose(grenander(fd(1, 2)).probs, [0.5, 0.5])

    def test_minimax(self):
        np.testing.assert_allclose(minimax(fd(2, 2)).probs, [0.5, 0.5])
        np.testing.assert_allclose(minimax(fd(3, 1)).probs, [2 / 3, 1 / 3])
        for k in (1, 4, 9):
            np.testing.assert_allclose(minimax(fd(k)).probs, [1.0])

    def test_all_return_probability_vectors(self):
        rng = np.random.default_rng(11)
        fits = (empirical, rearrangement, grenander, minimax)
        for _ in range(400):
            x = random_frequency_data(rng)
            for fit in fits:
                probs = fit(x).probs
                assert np.all(probs >= 0.0) and np.all(probs <= 1.0)
                assert probs.sum() == pytest.approx(1.0, abs=1e-12)
            for kind in KINDS:
                probs = stacked(x, kind).estimate.probs
                assert np.all(probs >= 0.0) and np.all(probs <= 1.0)
                assert probs.sum() == pytest.approx(1.0, abs=1e-12)


class TestLooVectors:
    def test_grenander_example(self):
        loo = loo_vectors(fd(1, 2), GRENANDER)
        np.testing.assert_allclose(loo.pi, [0.0, 0.5])
        np.testing.assert_allclose(loo.shape_loo, [0.5, 0.5])

    def test_rearrangement_example(self):
        loo = loo_vectors(fd(1, 2), REARRANGEMENT)
        np.testing.assert_allclose(loo.pi, [0.0, 0.5])
        np.testing.assert_allclose(loo.shape_loo, [1.0, 0.5])

    def test_zero_count_indices_stay_zero(self):
        for kind in KINDS:
            loo = loo_vectors(fd(0, 2, 1), kind)
            assert loo.pi[0] == 0.0
            assert loo.shape_loo[0] == 0.0

    def test_single_observation_rejected(self):
        for fn in (loo_vectors, loo_vectors_fast):
            with pytest.raises(InsufficientSampleError):
                fn(fd(1), GRENANDER)

    def test_fast_equals_reference(self):
        rng = np.random.default_rng(23)
        for _ in range(300):
            x = random_frequency_data(rng, max_len=200, max_n=5000)
            for kind in KINDS:
                slow = loo_vectors(x, kind)
                fast = loo_vectors_fast(x, kind)
                np.testing.assert_allclose(fast.pi, slow.pi, atol=1e-12)
                np.testing.assert_allclose(fast.shape_loo, slow.shape_loo, atol=1e-12)

    def test_fast_equals_reference_long_vectors(self):
        rng = np.random.default_rng(24)
        for _ in range(10):
            counts = rng.integers(0, 5, size=500)
            counts[-1] = max(counts[-1], 1)
            x = FrequencyData(counts.astype(np.int64))
            for kind in KINDS:
                slow = loo_vectors(x, kind)
                fast = loo_vectors_fast(x, kind)
                np.testing.assert_allclose(fast.shape_loo, slow.shape_loo, atol=1e-12)

    def test_leave_one_out_inequalities(self):
        # pi never exceeds the empirical estimate; the shape columns never
        # exceed n/(n-1) times their full-sample counterparts
        rng = np.random.default_rng(37)
        for _ in range(500):
            x = random_frequency_data(rng)
            base = empirical(x).probs
            scale = x.n / (x.n - 1)
            for kind, full in ((GRENANDER, grenander(x).probs), (REARRANGEMENT, rearrangement(x).probs)):
                loo = loo_vectors_fast(x, kind)
                assert np.all(loo.pi <= base + 1e-15)
                assert np.all(loo.shape_loo <= scale * full + 1e-12)


class TestCvBeta:
    def test_grenander_hand_values(self):
        beta, a_n, b_n = cv_beta(fd(1, 2), GRENANDER)
        assert a_n == pytest.approx(1 / 18)
        assert b_n == pytest.approx(2 / 9)
        assert beta == 1.0

    def test_rearrangement_hand_values(self):
        beta, a_n, b_n = cv_beta(fd(1, 2), REARRANGEMENT)
        assert a_n == pytest.approx(2 / 9)
        assert b_n == pytest.approx(4 / 9)
        assert beta == 1.0

    def test_decreasing_data_gives_zero(self):
        for kind in KINDS:
            beta, a_n, _ = cv_beta(fd(3, 2, 1), kind)
            assert a_n == 0.0
            assert beta == 0.0

    def test_single_observation_rejected(self):
        with pytest.raises(InsufficientSampleError):
            cv_beta(fd(1), GRENANDER)

    def test_beta_always_in_unit_interval(self):
        rng = np.random.default_rng(41)
        for _ in range(400):
            x = random_frequency_data(rng)
            for kind in KINDS:
                beta, _, _ = cv_beta(x, kind)
                assert 0.0 <= beta <= 1.0

    @staticmethod
    def direct_cv(x, kind, betas):
        """Evaluate the cross-validation criterion from its definition:
        sum of squared stacked coordinates minus twice the weighted
        leave-one-out stacked coordinates, for each beta."""
        base = empirical(x).probs
        shape = grenander(x).probs if kind == GRENANDER else rearrangement(x).probs
        loo = loo_vectors(x, kind)
        values = np.empty(len(betas))
        for i, beta in enumerate(betas):
            est = beta * shape + (1 - beta) * base
            loo_est = beta * loo.shape_loo + (1 - beta) * loo.pi
            values[i] = np.sum(est**2) - 2.0 * np.sum(base * loo_est)
        return values

    def test_quadratic_identity_and_minimizer(self):
        rng = np.random.default_rng(53)
        betas = np.linspace(0.0, 1.0, 201)
        for _ in range(60):
            x = random_frequency_data(rng, max_len=25, max_n=300)
            for kind in KINDS:
                beta_hat, a_n, b_n = cv_beta(x, kind)
                direct = self.direct_cv(x, kind, betas)
                quad = a_n * betas**2 - 2.0 * b_n * betas
                np.testing.assert_allclose(direct - direct[0], quad, atol=1e-10)
                if a_n > 1e-15:
                    cv_at_hat = self.direct_cv(x, kind, [beta_hat])[0]
                    assert cv_at_hat <= direct.min() + 1e-10
                else:
                    # base and shape coincide: any beta gives the same estimate
                    assert beta_hat == 0.0


class TestStacked:
    def test_grenander_example(self):
        fit = stacked(fd(1, 2), GRENANDER)
        assert fit.beta_hat == 1.0
        np.testing.assert_allclose(fit.estimate.probs, [0.5, 0.5])

    def test_decreasing_data_returns_empirical(self):
        fit = stacked(fd(3, 2, 1), GRENANDER)
        assert fit.beta_hat == 0.0
        np.testing.assert_allclose(fit.estimate.probs, [0.5, 1 / 3, 1 / 6])

    def test_rearrangement_example(self):
        fit = stacked(fd(1, 2), REARRANGEMENT)
        assert fit.beta_hat == 1.0
        np.testing.assert_allclose(fit.estimate.probs, [2 / 3, 1 / 3])

    def test_estimate_is_the_declared_mixture(self):
        rng = np.random.default_rng(67)
        for _ in range(100):
            x = random_frequency_data(rng)
            for kind in KINDS:
                fit = stacked(x, kind)
                mix = fit.beta_hat * fit.shape.probs + (1 - fit.beta_hat) * fit.base.probs
                np.testing.assert_array_equal(fit.estimate.probs, mix)

    def test_single_observation_degrades_with_flag(self):
        fit = stacked(fd(1), GRENANDER)
        assert fit.beta_hat == 0.0
        assert fit.b_n is None
        assert fit.diagnostics
        np.testing.assert_allclose(fit.estimate.probs, [1.0])

    def test_error_reduction_for_decreasing_truth(self):
        # when the truth is nonincreasing, stacking never does worse than
        # the empirical estimator, replication by replication
        from stackpmf import pmf_truncate

        for model in (UniformRange(11), Geometric(0.25)):
            truth = pmf_truncate(model, 1e-12).probs
            for rep in range(50):
                x = sample(model, 40, seed=1000 + rep)
                base = empirical(x).probs
                for kind in KINDS:
                    fit = stacked(x, kind)
                    for k in (1, 2, math.inf):
                        assert lk_distance(fit.estimate.probs, truth, k) <= (
                            lk_distance(base, truth, k) + 1e-12
                        )


class TestDistance:
    def test_zero_padding(self):
        assert lk_distance([1.0, 0.5], [1.0], 1) == pytest.approx(0.5)
        assert lk_distance([1.0], [1.0, 0.5], 2) == pytest.approx(0.5)
        assert lk_distance([0.2, 0.3], [0.2, 0.3], math.inf) == 0.0

    def test_norms(self):
        u, v = [1.0, 2.0, 0.0], [0.0, 0.0, 2.0]
        assert lk_distance(u, v, 1) == pytest.approx(5.0)
        assert lk_distance(u, v, 2) == pytest.approx(3.0)
        assert lk_distance(u, v, math.inf) == pytest.approx(2.0)
