import math
from unittest import TestCase

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from walshlab.dyadic.models import Grid1, Grid2
from walshlab.dyadic.services.walsh import walsh_row
from walshlab.maximal.exceptions import LevelOutOfRangeError
from walshlab.maximal.models import CellPyramid
from walshlab.maximal.services import (
    MaximalOperators,
    diagonal_average,
    diagonal_maximal,
    dyadic_maximal,
    dyadic_maximal_1d,
    hybrid_maximal,
    shear,
)


def interval_codes(code: int, level: int, resolution: int) -> range:
    width = 1 << (resolution - level)
    start = (code // width) * width
    return range(start, start + width)


def naive_dyadic_maximal(values: np.ndarray, absolute_inside: bool = False) -> np.ndarray:
    size = values.shape[0]
    resolution = size.bit_length() - 1
    data = np.abs(values) if absolute_inside else values
    result = np.zeros_like(values)
    for x in range(size):
        for y in range(size):
            best = 0.0
            for n in range(resolution + 1):
                rows = interval_codes(x, n, resolution)
                cols = interval_codes(y, n, resolution)
                average = sum(data[s, t] for s in rows for t in cols) / (len(rows) * len(cols))
                best = max(best, abs(average))
            result[x, y] = best
    return result


def naive_hybrid_maximal(values: np.ndarray, axis: int) -> np.ndarray:
    data = np.abs(values if axis == 1 else values.T)
    size = data.shape[0]
    resolution = size.bit_length() - 1
    result = np.zeros_like(data)
    for x in range(size):
        for y in range(size):
            result[x, y] = max(
                np.mean([data[s, y] for s in interval_codes(x, n, resolution)])
                for n in range(resolution + 1)
            )
    return result if axis == 1 else result.T


def naive_diagonal_average(values: np.ndarray, j: int) -> np.ndarray:
    size = values.shape[0]
    resolution = size.bit_length() - 1
    shifts = range(1 << (resolution - j))
    result = np.zeros_like(values)
    for x in range(size):
        for y in range(size):
            result[x, y] = np.mean([abs(values[x ^ s, y ^ s]) for s in shifts])
    return result


class CellPyramidTests(TestCase):
    def test_levels_sum_children(self):
        values = np.arange(16.0).reshape(4, 4)
        pyramid = CellPyramid.build(values, axes=(0, 1))
        assert_array_equal(pyramid.sums[2], values)
        assert_array_equal(pyramid.sums[1], [[10.0, 18.0], [42.0, 50.0]])
        assert_array_equal(pyramid.sums[0], [[120.0]])
        assert_array_equal(pyramid.average(0), np.full((4, 4), 7.5))

    def test_rectangular_pyramid(self):
        values = np.arange(8.0).reshape(4, 2)
        pyramid = CellPyramid.build(values, axes=(0,))
        assert_array_equal(pyramid.cell_averages(1), [[1.0, 2.0], [5.0, 6.0]])
        with self.assertRaises(LevelOutOfRangeError):
            pyramid.average(3)


class DyadicMaximalTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_constant(self):
        assert_array_equal(dyadic_maximal(Grid2.constant(4, -2.0)).values, 2.0)
        assert_array_equal(hybrid_maximal(Grid2.constant(4, -2.0), 1).values, 2.0)
        assert_array_equal(diagonal_maximal(Grid2.constant(4, -2.0)).values, 2.0)

    def test_single_cell_indicator(self):
        resolution = 3
        values = np.zeros((8, 8))
        values[5, 2] = 1.0
        result = dyadic_maximal(Grid2(resolution, values)).values
        for x in range(8):
            for y in range(8):
                shared = max(
                    s for s in range(resolution + 1)
                    if x >> (resolution - s) == 5 >> (resolution - s)
                    and y >> (resolution - s) == 2 >> (resolution - s)
                )
                self.assertAlmostEqual(result[x, y], 4.0 ** (shared - resolution), places=15)

    def test_matches_naive_oracle(self):
        for _ in range(5):
            values = self.rng.normal(size=(16, 16))
            grid = Grid2(4, values)
            assert_allclose(dyadic_maximal(grid).values, naive_dyadic_maximal(values), atol=1e-12)
            assert_allclose(
                dyadic_maximal(grid, absolute_inside=True).values,
                naive_dyadic_maximal(values, absolute_inside=True),
                atol=1e-12,
            )
            for axis in (1, 2):
                assert_allclose(
                    hybrid_maximal(grid, axis).values, naive_hybrid_maximal(values, axis),
                    atol=1e-12,
                )

    def test_hybrid_reduces_to_one_dimension(self):
        g = self.rng.normal(size=16)
        f = Grid2(4, np.repeat(g[:, None], 16, axis=1))
        expected = dyadic_maximal_1d(Grid1(4, g), absolute_inside=True).values
        assert_allclose(hybrid_maximal(f, 1).values, np.repeat(expected[:, None], 16, axis=1))

    def test_sublinear_and_homogeneous(self):
        operators = [
            dyadic_maximal,
            lambda f: hybrid_maximal(f, 1),
            lambda f: hybrid_maximal(f, 2),
            diagonal_maximal,
        ]
        for resolution in (2, 3, 5):
            size = 1 << resolution
            f = Grid2(resolution, self.rng.normal(size=(size, size)))
            g = Grid2(resolution, self.rng.normal(size=(size, size)))
            total = Grid2(resolution, f.values + g.values)
            scaled = Grid2(resolution, -3.0 * f.values)
            for operator in operators:
                self.assertTrue(
                    np.all(operator(total).values <= operator(f).values + operator(g).values + 1e-12)
                )
                assert_allclose(operator(scaled).values, 3.0 * operator(f).values, rtol=1e-12)


class DiagonalTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_constant(self):
        for j in range(4):
            assert_array_equal(diagonal_average(Grid2.constant(3, 1.5), j).values, 1.5)

    def test_diagonal_indicator_is_fixed(self):
        indicator = Grid2(4, np.eye(16))
        assert_array_equal(diagonal_maximal(indicator).values, np.eye(16))

    def test_matches_naive_oracle(self):
        for _ in range(5):
            values = self.rng.normal(size=(16, 16))
            operators = MaximalOperators(Grid2(4, values))
            for j in range(5):
                assert_allclose(
                    operators.diagonal_average(j).values, naive_diagonal_average(values, j),
                    atol=1e-12,
                )

    def test_level_out_of_range(self):
        with self.assertRaises(LevelOutOfRangeError):
            diagonal_average(Grid2.zeros(2), 3)

    def test_shear_examples(self):
        f = Grid2(3, np.tile(walsh_row(1, 3), (8, 1)))
        assert_array_equal(shear(f).values, np.outer(walsh_row(1, 3), walsh_row(1, 3)))
        g = Grid2(3, self.rng.normal(size=(8, 8)))
        assert_array_equal(shear(shear(g)).values, g.values)

    def test_integral_of_diagonal_maximal_is_shear_invariant(self):
        f = Grid2(4, self.rng.normal(size=(16, 16)))
        a = diagonal_maximal(f)
        self.assertEqual(
            math.fsum(a.values.ravel()), math.fsum(shear(a).values.ravel())
        )

    def test_diagonal_sup_bounded_by_sheared_hybrid(self):
        for resolution in range(1, 6):
            size = 1 << resolution
            f = Grid2(resolution, self.rng.normal(size=(size, size)))
            bound = hybrid_maximal(shear(f), 1).values
            codes = np.arange(size)
            sup = diagonal_maximal(f).values[codes[:, None], codes[:, None] ^ codes[None, :]]
            self.assertTrue(np.all(sup <= bound + 1e-12))
