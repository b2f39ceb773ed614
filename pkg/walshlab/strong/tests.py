import time
from unittest import TestCase

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from walshlab.dyadic.models import Grid1, Grid2
from walshlab.dyadic.services.partial_sums import partial_sum_1d, partial_sum_rect
from walshlab.dyadic.services.walsh import walsh_row
from walshlab.strong.exceptions import (
    InvalidPhiSpecError,
    PhiOverflowError,
    SweepCapError,
    TermCountError,
    UnsupportedExponentError,
)
from walshlab.strong.models import PhiSpec, power_magnitude
from walshlab.strong.services.convergence import centered_strong_errors, convergence_report
from walshlab.strong.services.means import (
    marcinkiewicz_mean,
    maximal_strong,
    phi_strong_mean,
    phi_strong_mean_1d,
    strong_mean,
)
from walshlab.strong.services.sweeps import diagonal_sweep, iter_diagonal_sums, iter_partial_sums_1d


def product_grid(i: int, j: int, resolution: int) -> Grid2:
    return Grid2(resolution, np.outer(walsh_row(i, resolution), walsh_row(j, resolution)))


def step_grid(level: int, resolution: int, seed: int) -> Grid2:
    cells = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(1 << level, 1 << level))
    width = 1 << (resolution - level)
    return Grid2(resolution, np.repeat(np.repeat(cells, width, axis=0), width, axis=1))


class PhiSpecTests(TestCase):
    def test_parse(self):
        self.assertEqual(PhiSpec.parse('pow:2'), PhiSpec(kind='pow', parameter=2.0))
        self.assertEqual(str(PhiSpec.parse(' exp:0.5 ')), 'exp:0.5')
        for text in ('pow', 'log:1', 'pow:-1', 'exp:abc', 'pow:inf'):
            with self.assertRaises(InvalidPhiSpecError):
                PhiSpec.parse(text)

    def test_apply(self):
        t = np.array([0.0, -1.0, 2.0])
        assert_allclose(PhiSpec(kind='pow', parameter=0.5).apply(t), [0.0, 1.0, np.sqrt(2.0)])
        assert_allclose(PhiSpec(kind='exp', parameter=1.0).apply(t), [0.0, np.e - 1, np.e ** 2 - 1])

    def test_power_magnitude_keeps_zero(self):
        assert_array_equal(power_magnitude(np.array([0.0, -0.0]), 0.3), [0.0, 0.0])


class DiagonalSweepTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(31)

    def test_walsh_product(self):
        f = product_grid(2, 5, 3)
        for m, partial_sum in enumerate(iter_diagonal_sums(f, 8)):
            expected = f.values if m > 5 else np.zeros((8, 8))
            assert_allclose(partial_sum, expected, atol=1e-14)

    def test_matches_rectangular_sums(self):
        f = Grid2(3, self.rng.normal(size=(8, 8)))
        sweep = diagonal_sweep(f, 8)
        self.assertFalse(sweep.streaming)
        assert_array_equal(sweep[0].values, 0.0)
        for m, partial_sum in enumerate(sweep):
            expected = partial_sum_rect(f, m, m).values
            assert_allclose(partial_sum, expected, rtol=1e-11, atol=1e-11)

    def test_terms_beyond_resolution_are_f(self):
        f = Grid2(2, self.rng.normal(size=(4, 4)))
        sums = list(iter_diagonal_sums(f, 7))
        self.assertEqual(len(sums), 7)
        for partial_sum in sums[4:]:
            assert_array_equal(partial_sum, f.values)

    def test_level_step_is_reconstructed_early(self):
        f = step_grid(2, 5, seed=1)
        sums = list(iter_diagonal_sums(f, 32))
        for partial_sum in sums[4:]:
            assert_allclose(partial_sum, f.values, atol=1e-13)

    def test_yielded_arrays_are_independent(self):
        f = Grid2(2, self.rng.normal(size=(4, 4)))
        first, second = list(iter_diagonal_sums(f, 2))
        assert_array_equal(first, 0.0)
        self.assertFalse(second.flags.writeable)

    def test_cap(self):
        with self.assertRaises(SweepCapError):
            diagonal_sweep(Grid2.zeros(2), 5)
        with self.assertRaises(TermCountError):
            list(iter_diagonal_sums(Grid2.zeros(2), -1))

    @pytest.mark.slow
    def test_full_sweep_time_at_million_cells(self):
        f = step_grid(6, 10, seed=3)
        start = time.perf_counter()
        largest = np.zeros((1024, 1024))
        for partial_sum in iter_diagonal_sums(f, 1024):
            np.maximum(largest, np.abs(partial_sum), out=largest)
        elapsed = time.perf_counter() - start
        self.assertLess(elapsed, 120.0)
        assert_allclose(partial_sum, f.values, atol=1e-12)

    def test_one_dimensional_sums(self):
        g = Grid1(4, self.rng.normal(size=16))
        for m, partial_sum in enumerate(iter_partial_sums_1d(g, 18)):
            assert_allclose(partial_sum, partial_sum_1d(g, min(m, 16)).values, atol=1e-12)


class StrongMeanTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(37)

    def test_constant(self):
        assert_allclose(strong_mean(Grid2.constant(3, 1.0), 1, 2).values, np.sqrt(0.5), rtol=1e-15)

    def test_orthogonal_product_vanishes(self):
        assert_allclose(strong_mean(product_grid(3, 3, 3), 2, 1).values, 0.0, atol=1e-14)

    def test_monotone_in_p(self):
        f = Grid2(3, self.rng.normal(size=(8, 8)))
        for n in range(4):
            lower = strong_mean(f, n, 1).values
            middle = strong_mean(f, n, 1.5).values
            upper = strong_mean(f, n, 2).values
            self.assertTrue(np.all(lower <= middle + 1e-12))
            self.assertTrue(np.all(middle <= upper + 1e-12))

    def test_fractional_exponent_matches_direct_formula(self):
        f = Grid2(2, self.rng.normal(size=(4, 4)))
        sums = [partial_sum_rect(f, m, m).values for m in range(4)]
        expected = np.mean([np.abs(s) ** 0.5 for s in sums], axis=0) ** 2
        assert_allclose(strong_mean(f, 2, 0.5).values, expected, rtol=1e-12, atol=1e-14)

    def test_homogeneous(self):
        f = Grid2(3, self.rng.normal(size=(8, 8)))
        scaled = Grid2(3, -2.0 * f.values)
        assert_allclose(strong_mean(scaled, 2, 1.5).values, 2.0 * strong_mean(f, 2, 1.5).values,
                        rtol=1e-12)

    def test_exponent_range(self):
        for p in (0, 2.5, -1):
            with self.assertRaises(UnsupportedExponentError):
                strong_mean(Grid2.zeros(2), 1, p)
        with self.assertRaises(TermCountError):
            strong_mean(Grid2.zeros(2), 3, 2)

    def test_maximal(self):
        assert_array_equal(maximal_strong(Grid2.zeros(3), 2).values, 0.0)
        assert_allclose(maximal_strong(Grid2.constant(4, 1.0), 2).values, np.sqrt(15 / 16), rtol=1e-15)
        f = Grid2(3, self.rng.normal(size=(8, 8)))
        self.assertTrue(np.all(maximal_strong(f, 1).values <= maximal_strong(f, 2).values + 1e-12))

    def test_centered_variant(self):
        f = Grid2.constant(3, 2.0)
        assert_allclose(strong_mean(f, 2, 1, centered=True).values, 0.5, rtol=1e-15)


class PhiMeanTests(TestCase):
    def test_constant(self):
        for phi in (PhiSpec(kind='pow', parameter=1.5), PhiSpec(kind='exp', parameter=2.0)):
            result = phi_strong_mean(Grid2.constant(3, -1.5), 5, phi).values
            assert_allclose(result, phi.apply(np.array(1.5)) / 5, rtol=1e-14)

    def test_step_bound(self):
        f = step_grid(2, 4, seed=9)
        phi = PhiSpec(kind='pow', parameter=1.0)
        sums = list(iter_diagonal_sums(f, 4))
        largest = max(np.abs(s - f.values).max() for s in sums)
        for n_terms in (4, 8, 16, 40):
            result = phi_strong_mean(f, n_terms, phi).values
            self.assertLessEqual(result.max(), 4 / n_terms * largest + 1e-12)

    def test_product_terms_vanish_after_reconstruction(self):
        f = product_grid(1, 1, 3)
        result = phi_strong_mean(f, 8, PhiSpec(kind='pow', parameter=1.0)).values
        expected = 2.0 * np.abs(f.values) / 8
        assert_allclose(result, expected, atol=1e-14)

    def test_one_dimensional(self):
        g = Grid1.constant(3, 2.0)
        result = phi_strong_mean_1d(g, 4, PhiSpec(kind='exp', parameter=1.0)).values
        assert_allclose(result, np.expm1(2.0) / 4, rtol=1e-14)

    def test_requires_terms(self):
        with self.assertRaises(TermCountError):
            phi_strong_mean(Grid2.zeros(1), 0, PhiSpec(kind='pow', parameter=1.0))

    def test_overflow_is_reported(self):
        phi = PhiSpec(kind='exp', parameter=20.0)
        result = phi_strong_mean(Grid2.constant(2, 30.0), 1, phi).values
        assert_allclose(result, np.expm1(600.0), rtol=1e-14)
        with self.assertRaises(PhiOverflowError):
            phi_strong_mean(Grid2.constant(2, 40.0), 3, phi)
        with self.assertRaises(PhiOverflowError):
            phi_strong_mean_1d(Grid1.constant(2, 40.0), 3, phi)


class MarcinkiewiczMeanTests(TestCase):
    def test_constant(self):
        for n_terms in (1, 3, 8, 20):
            assert_allclose(
                marcinkiewicz_mean(Grid2.constant(3, 1.0), n_terms).values,
                (n_terms - 1) / n_terms, rtol=1e-14, atol=1e-15,
            )

    def test_linear(self):
        rng = np.random.default_rng(41)
        f, g = Grid2(3, rng.normal(size=(8, 8))), Grid2(3, rng.normal(size=(8, 8)))
        combined = Grid2(3, 2.0 * f.values - g.values)
        assert_allclose(
            marcinkiewicz_mean(combined, 5).values,
            2.0 * marcinkiewicz_mean(f, 5).values - marcinkiewicz_mean(g, 5).values,
            atol=1e-12,
        )

    def test_step_error_bound(self):
        f = step_grid(2, 5, seed=4)
        largest = max(np.abs(s - f.values).max() for s in iter_diagonal_sums(f, 4))
        for n_terms in (8, 32, 100):
            error = np.abs(marcinkiewicz_mean(f, n_terms).values - f.values).max()
            self.assertLessEqual(error, 4 / n_terms * largest + 1e-12)


class ConvergenceTests(TestCase):
    def test_constant_error_decays_like_first_term(self):
        errors = centered_strong_errors(Grid2.constant(3, 2.0), 1, [2, 4, 100])
        assert_allclose(errors[2], 1.0)
        assert_allclose(errors[100], 0.02)

    def test_report_layout(self):
        report = convergence_report(step_grid(4, 8, seed=1), 2, [16, 64, 256])
        self.assertEqual([row['n'] for row in report.rows], [16, 64, 256])
        self.assertEqual(report.columns, ['n', 'sup_error', 'l1_error', 'slope'])
        self.assertIsNone(report.rows[0]['slope'])
        sup_errors = [row['sup_error'] for row in report.rows]
        self.assertTrue(sup_errors[0] > sup_errors[1] > sup_errors[2])

    def test_rejects_empty_list(self):
        with self.assertRaises(TermCountError):
            convergence_report(Grid2.zeros(2), 1, [])

    @pytest.mark.slow
    def test_step_functions_decay_at_expected_rate(self):
        n_list = [32, 64, 128, 256, 512, 1024]
        for p in (1, 2):
            for seed in range(5):
                report = convergence_report(step_grid(4, 8, seed=seed), p, n_list, fit_from=32)
                slope = report.summary['slope']
                self.assertLess(abs(slope + 1 / p), 0.15 / p)
