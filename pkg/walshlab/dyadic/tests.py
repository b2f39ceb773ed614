import tempfile
import time
from pathlib import Path
from unittest import TestCase

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from walshlab.dyadic.exceptions import (
    CoordinateOutOfRangeError,
    FrequencyOutOfRangeError,
    GridFormatError,
    NonFiniteValuesError,
    OutOfRangeError,
    PointOutOfRangeError,
    ResolutionError,
    ResolutionMismatchError,
)
from walshlab.dyadic.models import DyadicPoint, Grid1, Grid2, Spectrum1, Spectrum2
from walshlab.dyadic.services.averages import block_average
from walshlab.dyadic.services.io import dump_grid, dump_spectrum, load_grid, load_spectrum
from walshlab.dyadic.services.norms import llogl_functional, norm_p
from walshlab.dyadic.services.partial_sums import (
    dirichlet_kernel,
    dirichlet_values,
    marginal_partial_sum,
    partial_sum_rect,
)
from walshlab.dyadic.services.transforms import (
    fwht_forward,
    fwht_forward_2d,
    fwht_inverse,
    fwht_inverse_2d,
)
from walshlab.dyadic.services.walsh import (
    bit_reverse,
    bit_reverse_permutation,
    highest_bit,
    rademacher,
    walsh_matrix,
    walsh_row,
    walsh_value,
)


def naive_coefficients_1d(values: np.ndarray, resolution: int) -> np.ndarray:
    size = 1 << resolution
    coeffs = np.zeros(size)
    for i in range(size):
        for u in range(size):
            coeffs[i] += values[u] * walsh_value(i, DyadicPoint(u, resolution))
    return coeffs / size


def naive_coefficients_2d(values: np.ndarray, resolution: int) -> np.ndarray:
    size = 1 << resolution
    signs = np.array([
        [walsh_value(i, DyadicPoint(u, resolution)) for u in range(size)] for i in range(size)
    ])
    coeffs = np.zeros((size, size))
    for i in range(size):
        for j in range(size):
            coeffs[i, j] = np.sum(values * np.outer(signs[i], signs[j]))
    return coeffs / size ** 2


def product_grid(i: int, j: int, resolution: int) -> Grid2:
    return Grid2(resolution, np.outer(walsh_row(i, resolution), walsh_row(j, resolution)))


class DyadicPointTests(TestCase):
    def test_coordinates_are_msb_first(self):
        point = DyadicPoint(0b100, 3)
        self.assertEqual(point.coordinates(), (1, 0, 0))
        self.assertEqual(DyadicPoint.from_coordinates([1, 0, 0]), point)

    def test_unit_flips_the_matching_bit(self):
        self.assertEqual(DyadicPoint.unit(0, 3).code, 0b100)
        self.assertEqual(DyadicPoint.unit(2, 3).code, 0b001)
        with self.assertRaises(CoordinateOutOfRangeError):
            DyadicPoint.unit(3, 3)

    def test_addition_is_xor(self):
        self.assertEqual((DyadicPoint(5, 3) + DyadicPoint(3, 3)).code, 6)
        with self.assertRaises(ResolutionMismatchError):
            DyadicPoint(1, 3) + DyadicPoint(1, 2)

    def test_interval_is_contiguous_code_range(self):
        point = DyadicPoint(0b1011, 4)
        self.assertEqual(point.interval(2), range(8, 12))
        self.assertEqual(point.interval(0), range(0, 16))
        self.assertFalse(point.in_null_interval(1))
        self.assertTrue(DyadicPoint(0b0011, 4).in_null_interval(2))

    def test_embedding(self):
        self.assertEqual(DyadicPoint(3, 2).embed(), 0.75)

    def test_invalid_points(self):
        with self.assertRaises(PointOutOfRangeError):
            DyadicPoint(4, 2)
        with self.assertRaises(ResolutionError):
            DyadicPoint(0, 31)


class GridModelTests(TestCase):
    def test_values_are_read_only_copies(self):
        source = np.arange(4.0)
        grid = Grid1(2, source)
        source[0] = 10.0
        self.assertEqual(grid.values[0], 0.0)
        with self.assertRaises(ValueError):
            grid.values[0] = 1.0

    def test_flat_values_reshape_into_grid2(self):
        grid = Grid2(1, [1.0, 2.0, 3.0, 4.0])
        self.assertEqual(grid.values.shape, (2, 2))
        self.assertEqual(grid.values[1, 0], 3.0)

    def test_integral_is_haar_weighted(self):
        self.assertEqual(Grid2(1, [[1.0, 2.0], [3.0, 6.0]]).integral(), 3.0)

    def test_rejects_wrong_length_and_non_finite(self):
        with self.assertRaises(GridFormatError):
            Grid1(2, np.zeros(3))
        with self.assertRaises(NonFiniteValuesError):
            Grid1(1, [0.0, np.nan])


class WalshTests(TestCase):
    def test_w0_is_one(self):
        for code in range(8):
            self.assertEqual(walsh_value(0, DyadicPoint(code, 3)), 1)

    def test_rademacher_examples(self):
        self.assertEqual(walsh_value(1, DyadicPoint(1, 1)), -1)
        self.assertEqual(walsh_value(3, DyadicPoint.from_coordinates([1, 1])), 1)
        self.assertEqual(rademacher(0, DyadicPoint(0, 3)), 1)
        self.assertEqual(rademacher(1, DyadicPoint.from_coordinates([0, 1, 0])), -1)

    def test_rademacher_matches_walsh(self):
        for code in range(16):
            u = DyadicPoint(code, 4)
            for k in range(4):
                self.assertEqual(rademacher(k, u), walsh_value(1 << k, u))
                self.assertEqual(rademacher(k, u), (-1) ** u.coordinate(k))

    def test_out_of_range(self):
        with self.assertRaises(FrequencyOutOfRangeError):
            walsh_value(4, DyadicPoint(0, 2))
        with self.assertRaises(CoordinateOutOfRangeError):
            rademacher(2, DyadicPoint(0, 2))

    def test_character_and_translation_laws(self):
        for resolution in range(1, 7):
            table = walsh_matrix(resolution)
            size = 1 << resolution
            codes = np.arange(size)
            for a in range(size):
                assert_array_equal(table[a][None, :] * table, table[a ^ codes])
                assert_array_equal(
                    table[a][codes[:, None] ^ codes[None, :]],
                    np.outer(table[a], table[a]),
                )

    def test_rows_match_scalar_values(self):
        table = walsh_matrix(3)
        for n in range(8):
            assert_array_equal(walsh_row(n, 3), table[n])
            for code in range(8):
                self.assertEqual(table[n, code], walsh_value(n, DyadicPoint(code, 3)))

    def test_highest_bit(self):
        for n in range(1, 1 << 20):
            bit = highest_bit(n)
            self.assertTrue(1 << bit <= n < 1 << (bit + 1))
        with self.assertRaises(OutOfRangeError):
            highest_bit(0)

    def test_bit_reverse_permutation_is_involution(self):
        permutation = bit_reverse_permutation(5)
        assert_array_equal(permutation[permutation], np.arange(32))
        self.assertEqual(bit_reverse(0b00011, 5), 0b11000)


class TransformTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(20240601)

    def test_constant_has_single_coefficient(self):
        spectrum = fwht_forward(Grid1.constant(4, 2.5))
        self.assertEqual(spectrum.coeffs[0], 2.5)
        assert_array_equal(spectrum.coeffs[1:], 0.0)

    def test_sampled_character(self):
        spectrum = fwht_forward(Grid1(3, walsh_row(5, 3)))
        expected = np.zeros(8)
        expected[5] = 1.0
        assert_array_equal(spectrum.coeffs, expected)

    def test_matches_naive_summation(self):
        for resolution in range(1, 5):
            values = self.rng.normal(size=1 << resolution)
            assert_allclose(
                fwht_forward(Grid1(resolution, values)).coeffs,
                naive_coefficients_1d(values, resolution),
                rtol=0, atol=1e-12,
            )
            square = self.rng.normal(size=(1 << resolution, 1 << resolution))
            assert_allclose(
                fwht_forward_2d(Grid2(resolution, square)).coeffs,
                naive_coefficients_2d(square, resolution),
                rtol=0, atol=1e-12,
            )

    def test_round_trip_and_parseval_1d(self):
        for _ in range(20):
            resolution = int(self.rng.integers(0, 13))
            grid = Grid1(resolution, self.rng.normal(size=1 << resolution))
            spectrum = fwht_forward(grid)
            assert_allclose(fwht_inverse(spectrum).values, grid.values, rtol=1e-12, atol=1e-12)
            self.assertAlmostEqual(
                spectrum.energy() / np.mean(grid.values ** 2), 1.0, delta=1e-12
            )

    def test_round_trip_and_parseval_2d(self):
        for resolution in range(0, 8):
            grid = Grid2(resolution, self.rng.normal(size=(1 << resolution, 1 << resolution)))
            spectrum = fwht_forward_2d(grid)
            assert_allclose(fwht_inverse_2d(spectrum).values, grid.values, rtol=1e-12, atol=1e-12)
            self.assertAlmostEqual(
                spectrum.energy() / np.mean(grid.values ** 2), 1.0, delta=1e-12
            )

    @pytest.mark.slow
    def test_million_cell_transform_time(self):
        grid = Grid2(10, self.rng.normal(size=(1024, 1024)))
        start = time.perf_counter()
        spectrum = fwht_forward_2d(grid)
        elapsed = time.perf_counter() - start
        self.assertLess(elapsed, 2.0)
        self.assertAlmostEqual(spectrum.energy() / np.mean(grid.values ** 2), 1.0, delta=1e-10)


class PartialSumTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(7)
        self.grid = Grid2(4, self.rng.normal(size=(16, 16)))

    def test_full_and_empty_sums(self):
        assert_array_equal(partial_sum_rect(self.grid, 16, 16).values, self.grid.values)
        assert_array_equal(partial_sum_rect(self.grid, 0, 5).values, 0.0)
        with self.assertRaises(OutOfRangeError):
            partial_sum_rect(self.grid, 17, 1)

    def test_product_truncation(self):
        f = product_grid(2, 1, 3)
        assert_allclose(partial_sum_rect(f, 3, 2).values, f.values, atol=1e-15)
        assert_allclose(partial_sum_rect(f, 2, 2).values, 0.0, atol=1e-15)

    def test_matches_naive_coefficients(self):
        resolution = 3
        f = Grid2(resolution, self.rng.normal(size=(8, 8)))
        coeffs = naive_coefficients_2d(f.values, resolution)
        table = walsh_matrix(resolution).astype(float)
        for M, K in [(3, 5), (5, 7), (1, 6), (8, 3)]:
            expected = table[:M].T @ coeffs[:M, :K] @ table[:K]
            assert_allclose(partial_sum_rect(f, M, K).values, expected, atol=1e-12)

    def test_dyadic_sums_are_cell_averages(self):
        for resolution in range(1, 5):
            size = 1 << resolution
            f = Grid2(resolution, self.rng.normal(size=(size, size)))
            spectrum = fwht_forward_2d(f).coeffs
            table = walsh_matrix(resolution).astype(float)
            for m in range(resolution + 1):
                for k in range(resolution + 1):
                    expected = block_average(block_average(f.values, m, 0), k, 1)
                    via_coefficients = (
                        table[:1 << m].T @ spectrum[:1 << m, :1 << k] @ table[:1 << k]
                    )
                    assert_allclose(partial_sum_rect(f, 1 << m, 1 << k).values, expected, atol=1e-12)
                    assert_allclose(via_coefficients, expected, atol=1e-12)

    def test_marginal_sums(self):
        g = self.rng.normal(size=16)
        independent_of_x = Grid2(4, np.tile(g, (16, 1)))
        assert_allclose(marginal_partial_sum(independent_of_x, 1, 1).values, independent_of_x.values)
        assert_allclose(marginal_partial_sum(product_grid(2, 1, 2), 1, 1).values, 0.0, atol=1e-15)
        assert_allclose(
            marginal_partial_sum(self.grid, 4, 1).values,
            np.repeat(self.grid.values.reshape(4, 4, 16).mean(axis=1), 4, axis=0),
        )
        assert_allclose(
            marginal_partial_sum(self.grid, 3, 2).values,
            partial_sum_rect(self.grid, 16, 3).values,
        )


class DirichletTests(TestCase):
    def test_examples(self):
        assert_array_equal(dirichlet_kernel(1, 3).values, 1.0)
        assert_array_equal(dirichlet_values(3, 2), [3, 1, 1, -1])
        assert_array_equal(dirichlet_values(0, 3), 0)
        for resolution in range(2, 6):
            values = dirichlet_values(4, resolution)
            width = 1 << (resolution - 2)
            assert_array_equal(values[:width], 4)
            assert_array_equal(values[width:], 0)

    def test_matches_direct_sum(self):
        table = walsh_matrix(4)
        for m in range(17):
            assert_array_equal(dirichlet_values(m, 4), table[:m].sum(axis=0))

    def test_out_of_range(self):
        with self.assertRaises(OutOfRangeError):
            dirichlet_kernel(9, 3)


class NormTests(TestCase):
    def test_llogl(self):
        self.assertEqual(llogl_functional(Grid2.constant(3, 1.0)), 0.0)
        self.assertAlmostEqual(llogl_functional(Grid2.constant(3, np.e)), np.e, places=14)
        self.assertAlmostEqual(llogl_functional(Grid2.constant(2, -np.e)), np.e, places=14)

    def test_character_has_unit_norm(self):
        for resolution in range(2, 7):
            self.assertAlmostEqual(norm_p(Grid1(resolution, walsh_row(3, resolution)), 2), 1.0)
            self.assertAlmostEqual(norm_p(product_grid(3, 1, resolution), 2), 1.0)

    def test_rejects_non_positive_exponent(self):
        with self.assertRaises(OutOfRangeError):
            norm_p(Grid1.zeros(1), 0)


class GridFileTests(TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def test_grid_file_layout(self):
        path = dump_grid(Grid1(1, [0.1, -2.0]), self.path / 'g.csv')
        self.assertEqual(path.read_text(), 'resolution,1\n0.10000000000000001\n-2\n')

    def test_grid_and_spectrum_reload(self):
        rng = np.random.default_rng(3)
        grid = Grid2(3, rng.normal(size=(8, 8)))
        loaded = load_grid(dump_grid(grid, self.path / 'f.csv'))
        self.assertIsInstance(loaded, Grid2)
        assert_array_equal(loaded.values, grid.values)

        spectrum = fwht_forward(Grid1(3, rng.normal(size=8)))
        reloaded = load_spectrum(dump_spectrum(spectrum, self.path / 's.csv'))
        self.assertIsInstance(reloaded, Spectrum1)
        assert_array_equal(reloaded.values, spectrum.values)

    def test_bad_header(self):
        (self.path / 'bad.csv').write_text('size,2\n1\n2\n3\n4\n')
        with self.assertRaises(GridFormatError):
            load_grid(self.path / 'bad.csv')

    def test_value_count_mismatch(self):
        (self.path / 'short.csv').write_text('resolution,2\n1\n2\n3\n')
        with self.assertRaises(GridFormatError):
            load_grid(self.path / 'short.csv')

    def test_spectrum2_dimension_is_detected(self):
        spectrum = Spectrum2(1, [[1.0, 0.0], [0.0, 0.5]])
        reloaded = load_spectrum(dump_spectrum(spectrum, self.path / 's2.csv'))
        self.assertIsInstance(reloaded, Spectrum2)
