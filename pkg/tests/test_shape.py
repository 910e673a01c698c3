"""Tests for the isotonic projection and the decreasing rearrangement."""

import time

import numpy as np
import pytest

from oracles import brute_force_isotonic_decreasing, maximum_upper_sets
from stackpmf import EmptyInputError, isotonic_decreasing, rearrange_decreasing


class TestIsotonicDecreasing:
    def test_already_decreasing_is_identity(self):
        fitted, blocks = isotonic_decreasing([5.0, 3.0, 1.0])
        np.testing.assert_array_equal(fitted, [5.0, 3.0, 1.0])
        np.testing.assert_array_equal(blocks.boundaries, [0, 1, 2])

    def test_single_violation_pools_to_mean(self):
        fitted, _ = isotonic_decreasing([1.0, 3.0, 2.0])
        np.testing.assert_allclose(fitted, [2.0, 2.0, 2.0])

    def test_trailing_violation(self):
        fitted, _ = isotonic_decreasing([3.0, 1.0, 2.0])
        np.testing.assert_allclose(fitted, [3.0, 1.5, 1.5])

    def test_constant_vector_is_one_block(self):
        fitted, blocks = isotonic_decreasing([0.1] * 5)
        np.testing.assert_allclose(fitted, [0.1] * 5)
        assert len(blocks) == 1

    def test_empty_input_raises(self):
        with pytest.raises(EmptyInputError):
            isotonic_decreasing([])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            isotonic_decreasing([1.0, np.nan])

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(101)
        for _ in range(300):
            v = rng.normal(size=rng.integers(1, 9))
            fitted, _ = isotonic_decreasing(v)
            oracle = brute_force_isotonic_decreasing(v)
            np.testing.assert_allclose(fitted, oracle, atol=1e-10)

    def test_matches_repeated_argmax_scan(self):
        rng = np.random.default_rng(202)
        for _ in range(40):
            v = rng.normal(size=rng.integers(1, 120))
            fitted, _ = isotonic_decreasing(v)
            np.testing.assert_allclose(fitted, maximum_upper_sets(v), atol=1e-10)

    def test_sum_preserved(self):
        rng = np.random.default_rng(303)
        for size in (10, 1000, 10_000):
            v = rng.normal(size=size)
            fitted, _ = isotonic_decreasing(v)
            scale = max(1.0, float(np.sum(np.abs(v))))
            assert abs(fitted.sum() - v.sum()) <= 1e-12 * scale

    def test_bounds_preserved(self):
        rng = np.random.default_rng(404)
        for _ in range(50):
            v = rng.normal(size=rng.integers(1, 60))
            fitted, _ = isotonic_decreasing(v)
            assert fitted.min() >= v.min() - 1e-12
            assert fitted.max() <= v.max() + 1e-12

    def test_positive_scale_equivariant(self):
        rng = np.random.default_rng(505)
        for _ in range(50):
            v = rng.normal(size=rng.integers(1, 60))
            a = float(rng.uniform(0.01, 100.0))
            scaled, _ = isotonic_decreasing(a * v)
            fitted, _ = isotonic_decreasing(v)
            np.testing.assert_allclose(scaled, a * fitted, rtol=1e-12, atol=1e-12)

    def test_closer_than_input_to_any_feasible_vector(self):
        rng = np.random.default_rng(606)
        for _ in range(50):
            size = int(rng.integers(1, 40))
            v = rng.normal(size=size)
            g = np.sort(rng.normal(size=size))[::-1]
            fitted, _ = isotonic_decreasing(v)
            assert np.linalg.norm(fitted - g) <= np.linalg.norm(v - g) + 1e-12

    def test_block_structure_invariants(self):
        rng = np.random.default_rng(707)
        for _ in range(100):
            v = rng.normal(size=rng.integers(1, 80))
            fitted, blocks = isotonic_decreasing(v)
            assert blocks.boundaries[-1] == v.size - 1
            assert np.all(np.diff(blocks.boundaries) > 0)
            assert np.all(np.diff(blocks.levels) < 0)
            start = 0
            for end, level in zip(blocks.boundaries, blocks.levels):
                seg = v[start : end + 1]
                assert abs(seg.mean() - level) <= 1e-10
                np.testing.assert_allclose(fitted[start : end + 1], level)
                start = end + 1

    def test_near_linear_runtime_growth(self):
        # quadratic growth from 1e4 to 1e6 entries would blow past this ratio
        rng = np.random.default_rng(808)
        small = rng.normal(size=10_000)
        large = rng.normal(size=1_000_000)
        t0 = time.perf_counter()
        isotonic_decreasing(small)
        t_small = time.perf_counter() - t0
        t0 = time.perf_counter()
        isotonic_decreasing(large)
        t_large = time.perf_counter() - t0
        assert t_large < max(t_small, 1e-3) * 1500


class TestRearrangeDecreasing:
    def test_already_sorted(self):
        np.testing.assert_array_equal(rearrange_decreasing([0.5, 0.3, 0.2]), [0.5, 0.3, 0.2])

    def test_sorts_descending(self):
        np.testing.assert_array_equal(rearrange_decreasing([0.2, 0.5, 0.3]), [0.5, 0.3, 0.2])

    def test_ties(self):
        np.testing.assert_array_equal(rearrange_decreasing([0.25, 0.25, 0.5]), [0.5, 0.25, 0.25])

    def test_empty_input_raises(self):
        with pytest.raises(EmptyInputError):
            rearrange_decreasing([])

    def test_is_a_nonincreasing_permutation(self):
        rng = np.random.default_rng(909)
        for _ in range(200):
            v = rng.normal(size=rng.integers(1, 60))
            out = rearrange_decreasing(v)
            assert np.all(np.diff(out) <= 0)
            np.testing.assert_array_equal(np.sort(out), np.sort(v))
