import numpy as np

from walshlab.config.utils.utils import is_power_of_two
from walshlab.dyadic.exceptions import OutOfRangeError
from walshlab.dyadic.models import Grid1, Grid2, check_resolution
from walshlab.dyadic.services.averages import block_average, resolve_axis
from walshlab.dyadic.services.transforms import analyze, synthesize
from walshlab.dyadic.services.walsh import highest_bit


def _check_terms(count: int, resolution: int, label: str = 'Term count'):
    if not 0 <= count <= 1 << resolution:
        raise OutOfRangeError(
            f"{label} {count} is out of range [0, {1 << resolution}] at resolution {resolution}."
        )


def truncate_axis(values: np.ndarray, count: int, axis: int) -> np.ndarray:
    """Keeps the first ``count`` Walsh frequencies of a raw array along ``axis``."""
    size = values.shape[axis]
    if count >= size:
        return np.array(values, dtype=np.float64)
    if count == 0:
        return np.zeros(values.shape)
    if is_power_of_two(count):
        return block_average(values, highest_bit(count), axis)
    coeffs = analyze(values, axis)
    mask_shape = [1] * values.ndim
    mask_shape[axis] = size
    mask = (np.arange(size) < count).reshape(mask_shape)
    return synthesize(np.where(mask, coeffs, 0.0), axis)


def partial_sum_rect(f: Grid2, M: int, K: int) -> Grid2:
    """``S_{M,K} f``: frequencies ``i < M`` in x and ``j < K`` in y."""
    _check_terms(M, f.resolution, 'M')
    _check_terms(K, f.resolution, 'K')
    if M == 0 or K == 0:
        return Grid2.zeros(f.resolution)
    return Grid2(f.resolution, truncate_axis(truncate_axis(f.values, M, 0), K, 1))


def marginal_partial_sum(f: Grid2, n: int, axis: int) -> Grid2:
    """``S_n^{(1)} f`` (``axis=1``) or ``S_n^{(2)} f`` (``axis=2``)."""
    _check_terms(n, f.resolution, 'n')
    return Grid2(f.resolution, truncate_axis(f.values, n, resolve_axis(axis)))


def partial_sum_1d(g: Grid1, n: int) -> Grid1:
    _check_terms(n, g.resolution, 'n')
    return Grid1(g.resolution, truncate_axis(g.values, n, 0))


def dirichlet_values(m: int, resolution: int) -> np.ndarray:
    """Exact int64 values of ``D_m`` over all codes."""
    _check_terms(m, check_resolution(resolution), 'm')
    coeffs = (np.arange(1 << resolution) < m).astype(np.int64)
    return synthesize(coeffs)


def dirichlet_kernel(m: int, resolution: int) -> Grid1:
    return Grid1(resolution, dirichlet_values(m, resolution))
