import logging
from functools import partial
from typing import Iterator

import numpy as np

from walshlab.config import settings
from walshlab.dyadic.models import Grid1, Grid2
from walshlab.dyadic.services.transforms import fwht_forward, fwht_forward_2d, synthesize
from walshlab.dyadic.services.walsh import walsh_row
from walshlab.strong.exceptions import SweepCapError, TermCountError
from walshlab.strong.models import DiagonalSweep

logger = logging.getLogger(__name__)


def _check_count(count: int):
    if count < 0:
        raise TermCountError(f"Term count must be non-negative, got {count}.")


def iter_diagonal_sums(f: Grid2, count: int) -> Iterator[np.ndarray]:
    """
    Yields ``S_{mm} f`` for ``m = 0..count-1`` as fresh read-only arrays.

    Step ``m -> m + 1`` adds the border frequencies ``(m, j <= m)`` and ``(i < m, m)``.
    From ``m = 2**N`` on the sum is ``f`` itself and ``f.values`` is yielded.
    """
    _check_count(count)
    size = f.size
    coeffs = fwht_forward_2d(f).coeffs
    current = np.zeros((size, size))
    current.setflags(write=False)
    for m in range(count):
        if m >= size:
            yield f.values
            continue
        yield current
        character = walsh_row(m, f.resolution).astype(np.float64)
        row = np.where(np.arange(size) <= m, coeffs[m], 0.0)
        column = np.where(np.arange(size) < m, coeffs[:, m], 0.0)
        current = (
            current + np.outer(character, synthesize(row)) + np.outer(synthesize(column), character)
        )
        current.setflags(write=False)


def diagonal_sweep(f: Grid2, m_max: int) -> DiagonalSweep:
    """All ``S_{mm} f`` with ``m < m_max``; streamed from the streaming resolution on."""
    if not 0 <= m_max <= f.size:
        raise SweepCapError(f"Sweep cap must lie in [0, {f.size}], got {m_max}.")
    stream = partial(iter_diagonal_sums, f, m_max)
    if f.resolution >= settings.STREAMING_RESOLUTION:
        logger.debug("Streaming diagonal sweep", extra={'resolution': f.resolution, 'm_max': m_max})
        return DiagonalSweep(f, m_max, stream)
    return DiagonalSweep(f, m_max, stream, tuple(stream()))


def iter_partial_sums_1d(g: Grid1, count: int) -> Iterator[np.ndarray]:
    """Yields ``S_m g`` for ``m = 0..count-1``; ``g`` itself from ``m = 2**N`` on."""
    _check_count(count)
    coeffs = fwht_forward(g).coeffs
    current = np.zeros(g.size)
    current.setflags(write=False)
    for m in range(count):
        if m >= g.size:
            yield g.values
            continue
        yield current
        current = current + coeffs[m] * walsh_row(m, g.resolution)
        current.setflags(write=False)
