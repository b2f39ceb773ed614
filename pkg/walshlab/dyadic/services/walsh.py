from functools import lru_cache

import numpy as np

from walshlab.dyadic.exceptions import (
    CoordinateOutOfRangeError,
    FrequencyOutOfRangeError,
    OutOfRangeError,
)
from walshlab.dyadic.models import DyadicPoint, check_resolution


def highest_bit(n: int) -> int:
    """The ``|n|`` helper: ``2**|n| <= n < 2**(|n| + 1)``."""
    if n < 1:
        raise OutOfRangeError(f"|n| is defined for n >= 1, got {n}.")
    return n.bit_length() - 1


def bit_reverse(code: int, resolution: int) -> int:
    result = 0
    for _ in range(resolution):
        result = (result << 1) | (code & 1)
        code >>= 1
    return result


@lru_cache(maxsize=32)
def _bit_reverse_permutation(resolution: int) -> np.ndarray:
    codes = np.arange(1 << resolution, dtype=np.int64)
    reversed_codes = np.zeros_like(codes)
    for bit in range(resolution):
        reversed_codes |= ((codes >> bit) & 1) << (resolution - 1 - bit)
    reversed_codes.setflags(write=False)
    return reversed_codes


def bit_reverse_permutation(resolution: int) -> np.ndarray:
    """``perm[u] = bit_reverse(u)``; an involution, read-only and cached per resolution."""
    return _bit_reverse_permutation(check_resolution(resolution))


def _signs(bits: np.ndarray) -> np.ndarray:
    return np.where(np.bitwise_count(bits) & 1, -1, 1).astype(np.int64)


def walsh_value(n: int, u: DyadicPoint) -> int:
    if not 0 <= n < 1 << u.resolution:
        raise FrequencyOutOfRangeError(
            f"Frequency {n} is out of range at resolution {u.resolution}."
        )
    return -1 if (n & bit_reverse(u.code, u.resolution)).bit_count() & 1 else 1


def rademacher(k: int, u: DyadicPoint) -> int:
    if not 0 <= k < u.resolution:
        raise CoordinateOutOfRangeError(f"r_{k} does not exist at resolution {u.resolution}.")
    return walsh_value(1 << k, u)


def walsh_row(n: int, resolution: int) -> np.ndarray:
    """Values of ``w_n`` over all codes at ``resolution`` as an int64 array of signs."""
    if not 0 <= n < 1 << check_resolution(resolution):
        raise FrequencyOutOfRangeError(f"Frequency {n} is out of range at resolution {resolution}.")
    return _signs(n & bit_reverse_permutation(resolution))


def walsh_matrix(resolution: int) -> np.ndarray:
    """``W[n, u] = w_n(u)`` for all frequencies and codes."""
    frequencies = np.arange(1 << check_resolution(resolution), dtype=np.int64)
    return _signs(frequencies[:, None] & bit_reverse_permutation(resolution)[None, :])
