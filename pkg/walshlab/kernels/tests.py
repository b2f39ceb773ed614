from fractions import Fraction
from unittest import TestCase

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from walshlab.dyadic.models import DyadicPoint
from walshlab.dyadic.services.partial_sums import dirichlet_values
from walshlab.kernels.exceptions import (
    EpsilonIndexError,
    IdentityLimitError,
    SchippPreconditionError,
)
from walshlab.kernels.models import HalfInteger
from walshlab.kernels.services import (
    dyadic_dirichlet_values,
    epsilon,
    schipp_parts,
    schipp_rhs,
    verify_dyadic_dirichlet,
    verify_schipp_identity,
)


def corrupted_epsilon(k: int, j: int) -> int:
    if (k, j) == (1, 0):
        return 1
    return epsilon(k, j)


class HalfIntegerTests(TestCase):
    def test_arithmetic_is_exact(self):
        half = HalfInteger.power_of_two(-1)
        self.assertEqual(half.as_fraction(), Fraction(1, 2))
        self.assertEqual(half + half, 1)
        self.assertEqual((half * 3 - 1).as_fraction(), Fraction(1, 2))
        self.assertEqual(-HalfInteger.power_of_two(3), -8)
        self.assertFalse(half.is_integer())
        self.assertEqual(float(HalfInteger(-7)), -3.5)

    def test_power_of_two_lower_bound(self):
        with self.assertRaises(SchippPreconditionError):
            HalfInteger.power_of_two(-2)


class EpsilonTests(TestCase):
    def test_values(self):
        self.assertEqual(epsilon(2, 0), -1)
        self.assertEqual(epsilon(0, 0), 1)
        self.assertEqual(epsilon(3, 3), 1)

    def test_invalid_index(self):
        with self.assertRaises(EpsilonIndexError):
            epsilon(1, 2)


class SchippRhsTests(TestCase):
    def test_small_cases(self):
        for code in range(2):
            self.assertEqual(schipp_rhs(0, 1, DyadicPoint(code, 1)), 0)
            self.assertEqual(schipp_rhs(1, 1, DyadicPoint(code, 1)), 1)
        values = [schipp_rhs(3, 2, DyadicPoint(code, 2)) for code in range(4)]
        self.assertEqual(values, [3, 1, 1, -1])

    def test_scalar_and_vectorised_agree(self):
        for n in range(4):
            for m in range(1 << n):
                parts = schipp_parts(m, n, 4)
                for code in range(16):
                    self.assertEqual(parts.at(code), schipp_rhs(m, n, DyadicPoint(code, 4)))

    def test_equals_dirichlet_above_level_resolution(self):
        for m in range(8):
            assert_array_equal(schipp_parts(m, 3, 5).doubled, 2 * dirichlet_values(m, 5))

    def test_constant_on_level_cells(self):
        resolution, n = 5, 3
        width = 1 << (resolution - n)
        for m in range(1 << n):
            doubled = schipp_parts(m, n, resolution).doubled.reshape(-1, width)
            assert_array_equal(doubled[:, 0], doubled[:, -1])

    def test_preconditions(self):
        with self.assertRaises(SchippPreconditionError):
            schipp_rhs(4, 2, DyadicPoint(0, 3))
        with self.assertRaises(SchippPreconditionError):
            schipp_parts(0, 4, 3)


class VerificationTests(TestCase):
    def test_schipp_identity_small(self):
        report = verify_schipp_identity(1)
        self.assertTrue(report.ok)
        self.assertEqual(report.checked, 1 + 4)

    def test_schipp_identity_level_six(self):
        report = verify_schipp_identity(6)
        self.assertTrue(report.ok)
        self.assertEqual(report.checked, sum(4 ** n for n in range(7)))
        self.assertIsNone(report.first_failure)

    def test_corrupted_epsilon_fails_at_level_two(self):
        report = verify_schipp_identity(3, epsilon_fn=corrupted_epsilon)
        self.assertFalse(report.ok)
        self.assertEqual(report.first_failure.n, 2)

    def test_limits(self):
        with self.assertRaises(IdentityLimitError):
            verify_schipp_identity(13)
        with self.assertRaises(IdentityLimitError):
            verify_dyadic_dirichlet(21)

    def test_dyadic_dirichlet_values(self):
        assert_array_equal(dyadic_dirichlet_values(0, 3), np.ones(8))
        assert_array_equal(dyadic_dirichlet_values(2, 3), [4, 4, 0, 0, 0, 0, 0, 0])

    def test_dyadic_dirichlet_identity(self):
        report = verify_dyadic_dirichlet(12)
        self.assertTrue(report.ok)
        self.assertEqual(report.checked, 13 * 4096)

    @pytest.mark.slow
    def test_schipp_identity_full_range(self):
        self.assertTrue(verify_schipp_identity(12).ok)

    @pytest.mark.slow
    def test_dyadic_dirichlet_full_range(self):
        self.assertTrue(verify_dyadic_dirichlet(20).ok)
