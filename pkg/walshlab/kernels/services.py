import logging
from functools import lru_cache
from typing import Callable

import numpy as np

from walshlab.config import settings
from walshlab.dyadic.models import DyadicPoint, check_resolution
from walshlab.dyadic.services.walsh import walsh_row, walsh_value
from walshlab.dyadic.services.partial_sums import dirichlet_values
from walshlab.kernels.exceptions import (
    EpsilonIndexError,
    IdentityLimitError,
    SchippPreconditionError,
)
from walshlab.kernels.models import HalfInteger, SchippParts
from walshlab.kernels.schemes import IdentityFailure, IdentityReport

logger = logging.getLogger(__name__)

EpsilonFn = Callable[[int, int], int]


def epsilon(k: int, j: int) -> int:
    """``ε_{kj}``: ``+1`` on the diagonal ``j = k``, ``-1`` for ``j < k``."""
    if not 0 <= j <= k:
        raise EpsilonIndexError(f"ε is defined for 0 <= j <= k, got k={k}, j={j}.")
    return 1 if j == k else -1


@lru_cache(maxsize=64)
def _epsilon_table(n: int, epsilon_fn: EpsilonFn) -> np.ndarray:
    table = np.zeros((max(n, 1), max(n, 1)), dtype=np.int64)
    for k in range(n):
        for j in range(k + 1):
            table[k, j] = epsilon_fn(k, j)
    table.setflags(write=False)
    return table


def _check_schipp_arguments(m: int, n: int, resolution: int):
    if not 0 <= n <= resolution:
        raise SchippPreconditionError(f"Level n={n} exceeds resolution {resolution}.")
    if not 0 <= m < 1 << n:
        raise SchippPreconditionError(f"Schipp's representation needs m < 2**n, got m={m}, n={n}.")


def _depth(code: int, resolution: int) -> int:
    """The ``k`` with ``u ∈ I_k \\ I_{k+1}``; ``resolution`` for the null element."""
    return resolution - code.bit_length()


@lru_cache(maxsize=32)
def _depths(resolution: int) -> np.ndarray:
    codes = np.arange(1 << resolution, dtype=np.int64)
    lengths = np.zeros_like(codes)
    for bit in range(resolution):
        lengths = np.where(codes >> bit > 0, bit + 1, lengths)
    depths = resolution - lengths
    depths.setflags(write=False)
    return depths


def schipp_rhs(m: int, n: int, u: DyadicPoint, epsilon_fn: EpsilonFn = epsilon) -> HalfInteger:
    """Right-hand side of Schipp's representation of ``D_m(u)``, evaluated exactly."""
    _check_schipp_arguments(m, n, u.resolution)
    total = HalfInteger(-walsh_value(m, u))
    k = _depth(u.code, u.resolution)
    if k < n:
        for j in range(k + 1):
            weight = HalfInteger.power_of_two(j - 1) * epsilon_fn(k, j)
            total += weight * walsh_value(m, u + DyadicPoint.unit(j, u.resolution))
    else:
        total += HalfInteger(2 * m + 1)
    return total


def schipp_parts(m: int, n: int, resolution: int, epsilon_fn: EpsilonFn = epsilon) -> SchippParts:
    """Vectorised :func:`schipp_rhs` over every code at ``resolution``."""
    check_resolution(resolution)
    _check_schipp_arguments(m, n, resolution)
    codes = np.arange(1 << resolution, dtype=np.int64)
    depths = _depths(resolution)
    character = walsh_row(m, resolution)
    table = _epsilon_table(n, epsilon_fn)

    inside = depths < n
    rows = np.where(inside, depths, 0)
    translated = np.zeros(codes.size, dtype=np.int64)
    for j in range(n):
        weights = np.where(inside, table[rows, j], 0) << j
        translated += weights * character[codes ^ (1 << (resolution - 1 - j))]

    boundary = np.where(inside, 0, 2 * m + 1).astype(np.int64)
    return SchippParts(m, n, resolution, translated, character, boundary)


def verify_schipp_identity(n_max: int, epsilon_fn: EpsilonFn = epsilon) -> IdentityReport:
    """
    Checks ``2·rhs = 2·D_m`` for every ``n <= n_max``, ``m < 2**n`` and every point at
    resolution ``n``. Integer arithmetic throughout.
    """
    if not 0 <= n_max <= settings.SCHIPP_MAX_N:
        raise IdentityLimitError(f"n_max must lie in [0, {settings.SCHIPP_MAX_N}], got {n_max}.")

    checked = passed = 0
    first_failure = None
    for n in range(n_max + 1):
        kernel = np.zeros(1 << n, dtype=np.int64)
        for m in range(1 << n):
            doubled = schipp_parts(m, n, n, epsilon_fn).doubled
            matches = doubled == 2 * kernel
            checked += matches.size
            passed += int(matches.sum())
            if first_failure is None and not matches.all():
                code = int(np.argmin(matches))
                first_failure = IdentityFailure(
                    n=n, m=m, code=code, expected=float(kernel[code]), actual=doubled[code] / 2
                )
                logger.warning("Schipp identity fails", extra={'n': n, 'm': m, 'code': code})
            kernel += walsh_row(m, n)
        logger.debug("Schipp level checked", extra={'n': n})

    return IdentityReport(
        name='schipp', n_max=n_max, checked=checked, passed=passed, first_failure=first_failure
    )


def dyadic_dirichlet_values(n: int, resolution: int) -> np.ndarray:
    """``2**n · 1_{I_n}`` as int64 over every code."""
    check_resolution(resolution)
    if not 0 <= n <= resolution:
        raise SchippPreconditionError(f"Level n={n} exceeds resolution {resolution}.")
    codes = np.arange(1 << resolution, dtype=np.int64)
    return np.where(codes < 1 << (resolution - n), 1 << n, 0).astype(np.int64)


def verify_dyadic_dirichlet(n_max: int) -> IdentityReport:
    """Checks ``D_{2**n} = 2**n · 1_{I_n}`` at resolution ``n_max`` for every ``n <= n_max``."""
    if not 0 <= n_max <= settings.DIRICHLET_MAX_N:
        raise IdentityLimitError(
            f"n_max must lie in [0, {settings.DIRICHLET_MAX_N}], got {n_max}."
        )

    checked = passed = 0
    first_failure = None
    for n in range(n_max + 1):
        kernel = dirichlet_values(1 << n, n_max)
        expected = dyadic_dirichlet_values(n, n_max)
        matches = kernel == expected
        checked += matches.size
        passed += int(matches.sum())
        if first_failure is None and not matches.all():
            code = int(np.argmin(matches))
            first_failure = IdentityFailure(
                n=n, m=1 << n, code=code,
                expected=float(expected[code]), actual=float(kernel[code]),
            )

    return IdentityReport(
        name='dyadic_dirichlet', n_max=n_max, checked=checked, passed=passed,
        first_failure=first_failure,
    )
