from unittest import TestCase

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from walshlab.dyadic.models import Grid1, Grid2
from walshlab.dyadic.services.averages import block_average
from walshlab.schipp.exceptions import LevelOutOfRangeError
from walshlab.schipp.services import v_hybrid, v_hybrid_sup, v_n, v_profile, v_sup


def naive_v_n(values: np.ndarray, n: int) -> np.ndarray:
    size = values.shape[0]
    resolution = size.bit_length() - 1
    g = block_average(values, n)
    result = np.zeros(size)
    for x in range(size):
        squares = []
        for t in range(size):
            inner = sum(
                2.0 ** (j - 1) * g[x ^ t ^ (1 << (resolution - 1 - j))]
                for j in range(n)
                if t < 1 << (resolution - j)
            )
            squares.append(inner ** 2)
        result[x] = np.sqrt(np.mean(squares) / 2 ** n)
    return result


class VnTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(17)

    def test_constant_examples(self):
        for c in (1.0, -2.0):
            f = Grid1.constant(4, c)
            assert_allclose(v_n(f, 1).values, abs(c) / np.sqrt(8), rtol=1e-15)
            assert_array_equal(v_n(f, 0).values, 0.0)
            assert_allclose(v_n(f, 2).values, abs(c) * np.sqrt(5) / 4, rtol=1e-15)

    def test_matches_naive_oracle(self):
        for _ in range(5):
            values = self.rng.normal(size=16)
            for n in range(5):
                assert_allclose(v_n(Grid1(4, values), n).values, naive_v_n(values, n), atol=1e-12)

    def test_homogeneous(self):
        values = self.rng.normal(size=32)
        assert_allclose(
            v_n(Grid1(5, -2.5 * values), 3).values, 2.5 * v_n(Grid1(5, values), 3).values,
            rtol=1e-12,
        )

    def test_level_out_of_range(self):
        with self.assertRaises(LevelOutOfRangeError):
            v_n(Grid1.zeros(2), 3)


class VSupTests(TestCase):
    def test_zero(self):
        assert_array_equal(v_sup(Grid1.zeros(4)).values, 0.0)

    def test_constant_is_max_of_levels(self):
        f = Grid1.constant(4, 1.0)
        expected = max(naive_v_n(f.values, n)[0] for n in range(5))
        assert_allclose(v_sup(f).values, expected, rtol=1e-12)

    def test_profile(self):
        values = np.random.default_rng(2).normal(size=16)
        profile = v_profile(Grid1(4, values))
        self.assertEqual(len(profile.levels), 5)
        assert_array_equal(profile.sup.values, np.max(np.stack(profile.levels), axis=0))
        self.assertTrue(np.all(profile.sup.values >= 0))
        chosen = profile.argmax_level()
        assert_array_equal(np.stack(profile.levels)[chosen, np.arange(16)], profile.sup.values)


class VHybridTests(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(23)

    def test_reduces_to_one_dimension(self):
        g = self.rng.normal(size=8)
        f = Grid2(3, np.repeat(g[:, None], 8, axis=1))
        for n in range(4):
            expected = v_n(Grid1(3, g), n).values
            assert_allclose(v_hybrid(f, n, 1).values, np.repeat(expected[:, None], 8, axis=1))
            assert_allclose(v_hybrid(Grid2(3, f.values.T), n, 2).values.T, v_hybrid(f, n, 1).values)

    def test_constant(self):
        result = v_hybrid(Grid2.constant(3, 2.0), 1, 2).values
        assert_allclose(result, 2.0 / np.sqrt(8), rtol=1e-15)

    def test_matches_naive_oracle(self):
        for _ in range(5):
            values = self.rng.normal(size=(8, 8))
            f = Grid2(3, values)
            for n in range(4):
                by_columns = np.stack([naive_v_n(values[:, y], n) for y in range(8)], axis=1)
                by_rows = np.stack([naive_v_n(values[x, :], n) for x in range(8)], axis=0)
                assert_allclose(v_hybrid(f, n, 1).values, by_columns, atol=1e-12)
                assert_allclose(v_hybrid(f, n, 2).values, by_rows, atol=1e-12)

    def test_products(self):
        u, w = self.rng.normal(size=16), self.rng.normal(size=16)
        f = Grid2(4, np.outer(u, w))
        for y in range(16):
            expected = v_n(Grid1(4, u * w[y]), 2).values
            assert_allclose(v_hybrid(f, 2, 1).values[:, y], expected, atol=1e-12)

    def test_sup_matches_levels(self):
        f = Grid2(4, self.rng.normal(size=(16, 16)))
        for axis in (1, 2):
            expected = np.max(np.stack([v_hybrid(f, n, axis).values for n in range(5)]), axis=0)
            assert_allclose(v_hybrid_sup(f, axis).values, expected, rtol=1e-15)
