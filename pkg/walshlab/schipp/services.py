import logging

import numpy as np

from walshlab.dyadic.models import Grid1, Grid2
from walshlab.dyadic.services.averages import cell_means, expand, resolve_axis
from walshlab.schipp.exceptions import LevelOutOfRangeError
from walshlab.schipp.models import VProfile

logger = logging.getLogger(__name__)


def _check_level(n: int, resolution: int):
    if not 0 <= n <= resolution:
        raise LevelOutOfRangeError(f"Level {n} is out of range [0, {resolution}].")


def _square_function(averages: np.ndarray) -> np.ndarray:
    """
    ``V_n`` on level-n cells for a batch of columns.

    ``averages`` has shape ``(2**n, batch)`` and holds ``S_{2^n} f`` per cell. With
    ``h_k(c) = Σ_{j<=k} 2**(j-1) a(c + e_j)``, the points ``t`` of depth ``k`` contribute the
    sum of ``h_k**2`` over the level-(k+1) block of ``x + e_k``, and ``t`` in ``I_n`` adds
    ``h_{n-1}(x)**2``.
    """
    cells, batch = averages.shape
    n = cells.bit_length() - 1
    if n == 0:
        return np.zeros((1, batch))

    codes = np.arange(cells)
    partial = np.zeros((cells, batch))
    total = np.zeros((cells, batch))
    for k in range(n):
        flip = 1 << (n - 1 - k)
        partial = partial + (2.0 ** (k - 1)) * averages[codes ^ flip]
        width = 1 << (n - k - 1)
        block_sums = (partial ** 2).reshape(cells // width, width, batch).sum(axis=1)
        total += block_sums[(codes ^ flip) // width]
    total += partial ** 2
    return np.sqrt(total) / cells


def _v_columns(values: np.ndarray, n: int) -> np.ndarray:
    """``V_n`` along axis 0 of a ``(2**N, batch)`` array, expanded back to resolution N."""
    resolution = values.shape[0].bit_length() - 1
    result = _square_function(cell_means(values, n, axis=0))
    return expand(result, resolution, axis=0)


def v_n(f: Grid1, n: int) -> Grid1:
    """Schipp's ``V_n f`` evaluated exactly on level-N data."""
    _check_level(n, f.resolution)
    return Grid1(f.resolution, _v_columns(f.values[:, None], n)[:, 0])


def v_profile(f: Grid1) -> VProfile:
    columns = f.values[:, None]
    levels = tuple(_v_columns(columns, n)[:, 0] for n in range(f.resolution + 1))
    return VProfile(f.resolution, levels)


def v_sup(f: Grid1) -> Grid1:
    """``Vf = sup_n V_n f`` over ``n <= N``."""
    return v_profile(f).sup


def _oriented(f: Grid2, axis: int) -> tuple[np.ndarray, bool]:
    transpose = resolve_axis(axis) == 1
    return (f.values.T if transpose else f.values), transpose


def v_hybrid(f: Grid2, n: int, axis: int) -> Grid2:
    """``V₁(x, y, f)`` (``axis=1``) or ``V₂(x, y, f)`` (``axis=2``) at level ``n``."""
    _check_level(n, f.resolution)
    values, transpose = _oriented(f, axis)
    result = _v_columns(values, n)
    return Grid2(f.resolution, result.T if transpose else result)


def v_hybrid_sup(f: Grid2, axis: int) -> Grid2:
    values, transpose = _oriented(f, axis)
    best = np.zeros_like(values)
    for n in range(1, f.resolution + 1):
        best = np.maximum(best, _v_columns(values, n))
    logger.debug("Hybrid V computed", extra={'axis': axis, 'resolution': f.resolution})
    return Grid2(f.resolution, best.T if transpose else best)
