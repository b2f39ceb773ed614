from fractions import Fraction
from unittest import TestCase, mock

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from walshlab.cli.corpus import default_corpus
from walshlab.config import settings
from walshlab.dyadic.exceptions import ResolutionMismatchError
from walshlab.dyadic.models import DyadicPoint, Grid2
from walshlab.dyadic.services.partial_sums import dirichlet_values, partial_sum_rect
from walshlab.dyadic.services.walsh import walsh_row
from walshlab.lab.exceptions import (
    DualCoefficientsError,
    EmptyCorpusError,
    InvalidLambdaGridError,
    RationalModeError,
)
from walshlab.lab.models import DualCoefficients, JBreakdown
from walshlab.lab.services.decomposition import decomposition_report, j_terms, schipp_factors
from walshlab.lab.services.duality import (
    bilinear_form,
    dirichlet_matrix,
    duality_check,
    duality_report,
)
from walshlab.lab.services.mainest import mainest_bound, mainest_ratio, maximal_bound_report
from walshlab.lab.services.weak_type import (
    WeakOperator,
    default_lambda_grid,
    distribution_table,
    weak_type_constant,
)
from walshlab.maximal.services import MaximalOperators
from walshlab.strong.services.sweeps import iter_diagonal_sums


def naive_bilinear_form(f: Grid2, alpha: DualCoefficients, x: int, y: int) -> float:
    """Direct sum over level-N cells of ``g(x + s, y + t) Σ_m α_m D_m(s) D_m(t)``."""
    size = f.size
    g = partial_sum_rect(f, 1 << alpha.n, 1 << alpha.n).values
    kernels = [dirichlet_values(m, f.resolution) for m in range(1 << alpha.n)]
    total = 0.0
    for s in range(size):
        for t in range(size):
            weight = sum(float(a) * kernel[s] * kernel[t] for a, kernel in zip(alpha.alpha, kernels))
            total += g[x ^ s, y ^ t] * weight
    return total / size ** 2


def random_alpha(rng: np.random.Generator, n: int) -> DualCoefficients:
    weights = rng.normal(size=1 << n)
    return DualCoefficients(n, tuple(weights / np.linalg.norm(weights)))


def dyadic_grid(rng: np.random.Generator, resolution: int) -> Grid2:
    """Values on a 1/64 lattice, exact in binary floating point."""
    size = 1 << resolution
    return Grid2(resolution, rng.integers(-64, 65, size=(size, size)) / 64)


class DualCoefficientsTests(TestCase):
    def test_length_and_finiteness(self):
        with self.assertRaises(DualCoefficientsError):
            DualCoefficients(2, (1.0, 0.0))
        with self.assertRaises(DualCoefficientsError):
            DualCoefficients(1, (float('nan'), 0.0))
        with self.assertRaises(DualCoefficientsError):
            DualCoefficients.unit(1, 2)

    def test_optimal(self):
        alpha = DualCoefficients.optimal(1, [3.0, 4.0])
        assert_allclose(alpha.alpha, [0.6, 0.8])
        self.assertTrue(alpha.is_admissible())
        self.assertEqual(DualCoefficients.optimal(2, [0.0] * 4).alpha, (0.0,) * 4)

    def test_breakdown_totals(self):
        breakdown = JBreakdown(tuple(Fraction(k, 3) for k in range(9)), Fraction(12), exact=True)
        self.assertEqual(breakdown.total, 12)
        self.assertEqual(breakdown.residual, 0)
        self.assertEqual(list(breakdown.as_dict()), [f"J{k}" for k in range(1, 10)])


class BilinearFormTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(53)

    def test_dirichlet_matrix(self):
        for n in range(4):
            for m in range(1 << n):
                assert_array_equal(dirichlet_matrix(n)[m], dirichlet_values(m, n))

    def test_matches_naive_oracle(self):
        f = Grid2(3, self.rng.normal(size=(8, 8)))
        for n in (1, 2, 3):
            alpha = random_alpha(self.rng, n)
            for x, y in ((0, 0), (5, 2), (7, 6)):
                result = bilinear_form(f, alpha, DyadicPoint(x, 3), DyadicPoint(y, 3))
                assert_allclose(result, naive_bilinear_form(f, alpha, x, y), rtol=1e-12, atol=1e-13)

    def test_unit_coefficients_reproduce_diagonal_sums(self):
        f = Grid2(3, self.rng.normal(size=(8, 8)))
        sums = list(iter_diagonal_sums(f, 4))
        x, y = DyadicPoint(3, 3), DyadicPoint(6, 3)
        for m in range(4):
            result = bilinear_form(f, DualCoefficients.unit(2, m), x, y)
            assert_allclose(result, sums[m][3, 6], atol=1e-12)

    def test_constant(self):
        alpha = DualCoefficients(2, (0.5, -0.25, 0.75, 1.0))
        result = bilinear_form(Grid2.constant(3, 2.0), alpha, DyadicPoint(1, 3), DyadicPoint(4, 3))
        # D_0 vanishes, every other kernel integrates to one
        assert_allclose(result, 2.0 * (-0.25 + 0.75 + 1.0), rtol=1e-14)

    def test_zero_coefficients(self):
        f = Grid2(2, self.rng.normal(size=(4, 4)))
        self.assertEqual(bilinear_form(f, DualCoefficients.zeros(2), DyadicPoint(1, 2),
                                       DyadicPoint(2, 2)), 0.0)

    def test_exact_mode(self):
        f = dyadic_grid(self.rng, 3)
        alpha = DualCoefficients(2, (Fraction(1, 2), Fraction(-1, 3), Fraction(0), Fraction(2, 7)))
        x, y = DyadicPoint(2, 3), DyadicPoint(7, 3)
        exact = bilinear_form(f, alpha, x, y, exact=True)
        self.assertIsInstance(exact, Fraction)
        assert_allclose(float(exact), naive_bilinear_form(f, alpha, 2, 7), rtol=1e-12)

    def test_preconditions(self):
        f = Grid2.zeros(2)
        with self.assertRaises(DualCoefficientsError):
            bilinear_form(f, DualCoefficients.zeros(3), DyadicPoint(0, 2), DyadicPoint(0, 2))
        with self.assertRaises(ResolutionMismatchError):
            bilinear_form(f, DualCoefficients.zeros(1), DyadicPoint(0, 3), DyadicPoint(0, 2))
        with self.assertRaises(RationalModeError):
            bilinear_form(Grid2.zeros(4), DualCoefficients.zeros(1), DyadicPoint(0, 4),
                          DyadicPoint(0, 4), exact=True)


class DualityTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(59)

    def test_random_functions_all_points(self):
        for _ in range(10):
            report = duality_report(Grid2(3, self.rng.normal(size=(8, 8))), 2)
            self.assertEqual(report.summary['checked'], 64)
            self.assertTrue(report.summary['ok'])
            self.assertLessEqual(report.summary['max_relative_error'], 1e-10)

    def test_zero_function(self):
        check = duality_check(Grid2.zeros(3), 2, DyadicPoint(1, 3), DyadicPoint(5, 3))
        self.assertEqual((check.lhs, check.rhs), (0.0, 0.0))
        self.assertTrue(check.passed)

    def test_walsh_product(self):
        f = Grid2(3, np.outer(walsh_row(1, 3), walsh_row(2, 3)))
        x, y = DyadicPoint(4, 3), DyadicPoint(3, 3)
        check = duality_check(f, 2, x, y)
        # S_mm f = f for m = 3 only among m < 4
        assert_allclose(check.lhs, 1.0, rtol=1e-14)
        self.assertTrue(check.passed)

    def test_admissible_coefficients_stay_below_diagonal_norm(self):
        f = Grid2(3, self.rng.normal(size=(8, 8)))
        x, y = DyadicPoint(2, 3), DyadicPoint(5, 3)
        lhs = duality_check(f, 2, x, y).lhs
        for _ in range(20):
            self.assertLessEqual(bilinear_form(f, random_alpha(self.rng, 2), x, y), lhs + 1e-10)


class DecompositionTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(61)

    def test_schipp_factors_rebuild_kernels(self):
        for n in range(4):
            factors = schipp_factors(n)
            assert_array_equal(factors['P'] + factors['W'] + factors['E'], 2 * dirichlet_matrix(n))

    def test_sum_matches_bilinear_form(self):
        for _ in range(10):
            f = Grid2(4, self.rng.normal(size=(16, 16)))
            for n in range(4):
                alpha = random_alpha(self.rng, n)
                x, y = (DyadicPoint(int(code), 4) for code in self.rng.integers(16, size=2))
                breakdown = j_terms(f, alpha, x, y)
                self.assertEqual(len(breakdown.terms), 9)
                self.assertLessEqual(breakdown.relative_residual(), 1e-9)

    def test_exact_identity(self):
        for _ in range(3):
            f = dyadic_grid(self.rng, 3)
            alpha = DualCoefficients(2, tuple(Fraction(int(k), 5) for k in self.rng.integers(-5, 6, 4)))
            breakdown = j_terms(f, alpha, DyadicPoint(3, 3), DyadicPoint(6, 3), exact=True)
            self.assertTrue(all(isinstance(term, Fraction) for term in breakdown.terms))
            self.assertEqual(breakdown.residual, 0)

    def test_boundary_term_of_constant(self):
        alpha = DualCoefficients(2, (0.25, -0.5, 1.0, 0.5))
        breakdown = j_terms(Grid2.constant(3, 3.0), alpha, DyadicPoint(5, 3), DyadicPoint(0, 3))
        expected = 3.0 / 16 * sum(a * (m + 0.5) ** 2 for m, a in enumerate(alpha.alpha))
        assert_allclose(breakdown.terms[8], expected, rtol=1e-14)

    def test_zero_coefficients(self):
        f = Grid2(3, self.rng.normal(size=(8, 8)))
        breakdown = j_terms(f, DualCoefficients.zeros(2), DyadicPoint(1, 3), DyadicPoint(2, 3))
        self.assertEqual(breakdown.terms, (0.0,) * 9)

    def test_report(self):
        report = decomposition_report(Grid2(3, self.rng.normal(size=(8, 8))), 2, samples=4, seed=7)
        self.assertTrue(report.summary['ok'])
        self.assertEqual(len(report.rows), 4)
        self.assertIn('J9', report.columns)
        self.assertEqual(report.provenance.seed, 7)


class MainEstimateTests(TestCase):
    def test_zero(self):
        report = mainest_ratio(Grid2.zeros(3))
        self.assertEqual(len(report.rows), 4)
        self.assertEqual(report.summary['max_ratio'], 0.0)

    def test_constant(self):
        report = mainest_ratio(Grid2.constant(4, 1.0))
        self.assertLessEqual(report.summary['max_ratio'], 1.0)
        self.assertTrue(np.all(mainest_bound(Grid2.constant(4, 1.0)) >= 1.0))

    def test_random_ratio_is_finite(self):
        f = Grid2(4, np.random.default_rng(67).normal(size=(16, 16)))
        report = mainest_ratio(f)
        self.assertEqual([row['n'] for row in report.rows], list(range(5)))
        self.assertTrue(0 < report.summary['max_ratio'] < np.inf)

    def test_maximal_bounds(self):
        corpus = {'const:1': Grid2.constant(3, 1.0), 'const:0': Grid2.zeros(3)}
        report = maximal_bound_report(corpus)
        self.assertEqual([row['spec'] for row in report.rows], ['const:1', 'const:0'])
        assert_allclose(report.rows[0]['max_ratio'], 1.0)
        self.assertEqual(report.rows[1]['max_ratio'], 0.0)


class WeakTypeTests(TestCase):
    def setUp(self):
        rng = np.random.default_rng(71)
        self.corpus = {
            'const:1': Grid2.constant(3, 1.0),
            'random': Grid2(3, rng.normal(size=(8, 8))),
        }

    def test_distribution_table(self):
        values = np.array([0.0, 1.0, 2.0, 3.0])
        assert_allclose(distribution_table(values, [0.5, 1.0, 2.5, 10.0]), [0.75, 0.5, 0.25, 0.0])
        for grid in ([], [1.0, 1.0], [-1.0, 2.0], [2.0, 1.0]):
            with self.assertRaises(InvalidLambdaGridError):
                distribution_table(values, grid)

    def test_default_grid(self):
        grid = default_lambda_grid(np.array([0.0, 0.0, 4.0]))
        self.assertEqual(grid.size, settings.LAMBDA_GRID_POINTS)
        assert_allclose([grid[0], grid[-1]], [0.04, 400.0])
        self.assertIsNone(default_lambda_grid(np.zeros(4)))

    def test_constant_strong_maximal(self):
        report = weak_type_constant(WeakOperator.HSTAR, {'const:1': Grid2.constant(3, 1.0)},
                                    lambda_grid=[0.5, 1.0, 2.0])
        row = report.rows[0]
        self.assertEqual(row['sup_constant'], 0.5)
        self.assertEqual(row['argmax_lambda'], 0.5)

    def test_report_layout(self):
        report = weak_type_constant(WeakOperator.V, self.corpus)
        self.assertEqual(report.columns, ['spec', 'sup_constant', 'argmax_lambda'])
        self.assertEqual(report.summary['operator'], 'v')
        self.assertEqual(report.summary['corpus_max'],
                         max(row['sup_constant'] for row in report.rows))

    def test_every_operator(self):
        for operator in WeakOperator:
            report = weak_type_constant(operator, self.corpus)
            self.assertTrue(np.isfinite(report.summary['corpus_max']))

    def test_zero_function(self):
        report = weak_type_constant(WeakOperator.M, {'zero': Grid2.zeros(2)})
        self.assertEqual(report.rows[0], {'spec': 'zero', 'sup_constant': 0.0, 'argmax_lambda': None})

    def test_independent_of_thread_count(self):
        with mock.patch.object(settings, 'THREADS', 1):
            serial = weak_type_constant(WeakOperator.HSTAR, self.corpus).model_dump_json()
        with mock.patch.object(settings, 'THREADS', 4):
            threaded = weak_type_constant(WeakOperator.HSTAR, self.corpus).model_dump_json()
        self.assertEqual(serial, threaded)

    def test_corpus_errors(self):
        with self.assertRaises(EmptyCorpusError):
            weak_type_constant(WeakOperator.M, {})
        with self.assertRaises(ResolutionMismatchError):
            weak_type_constant(WeakOperator.M, {'a': Grid2.zeros(2), 'b': Grid2.zeros(3)})

    def test_composed_operator_is_v_of_hybrid_maximal(self):
        f = self.corpus['random']
        hybrid = MaximalOperators(f).hybrid(2)
        composed = weak_type_constant(WeakOperator.V_M2, {'f': f})
        direct = weak_type_constant(WeakOperator.V, {'f': hybrid})
        self.assertEqual(composed.rows, direct.rows)
        assert_array_equal(WeakOperator('v2_m1').source(f).values,
                           MaximalOperators(f).hybrid(1).values)


class CorpusStabilityTests(TestCase):
    """Empirical constants over the default corpus stay within a factor 2 as N grows."""

    def assert_stable(self, values: list[float]):
        self.assertGreater(min(values), 0.0, values)
        self.assertLess(max(values) / min(values), 2.0, values)

    def weak_type_maxima(self, operator: WeakOperator, resolutions: tuple[int, ...]) -> list[float]:
        return [
            weak_type_constant(operator, default_corpus(resolution)).summary['corpus_max']
            for resolution in resolutions
        ]

    @pytest.mark.slow
    def test_strong_maximal_weak_constant(self):
        self.assert_stable(self.weak_type_maxima(WeakOperator.HSTAR, (6, 8, 10)))

    @pytest.mark.slow
    def test_v_weak_constant(self):
        self.assert_stable(self.weak_type_maxima(WeakOperator.V, (6, 8, 10)))

    @pytest.mark.slow
    def test_v_of_hybrid_maximal_weak_constants(self):
        self.assert_stable(self.weak_type_maxima(WeakOperator.V_M2, (6, 8)))
        self.assert_stable(self.weak_type_maxima(WeakOperator.V2_M1, (6, 8)))

    @pytest.mark.slow
    def test_maximal_norms_against_llogl(self):
        reports = [maximal_bound_report(default_corpus(resolution)) for resolution in (6, 8, 10)]
        for column in ('m_norm', 'm1_norm', 'm2_norm', 'a_norm'):
            self.assert_stable([
                max(row[column] / row['bound'] for row in report.rows) for report in reports
            ])
        self.assert_stable([report.summary['corpus_max'] for report in reports])

    @pytest.mark.slow
    def test_core_estimate_ratio(self):
        self.assert_stable([
            max(mainest_ratio(f).summary['max_ratio'] for f in default_corpus(resolution).values())
            for resolution in (5, 6, 7)
        ])
