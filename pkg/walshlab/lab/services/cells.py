from fractions import Fraction

import numpy as np

from walshlab.config import settings
from walshlab.dyadic.exceptions import ResolutionMismatchError
from walshlab.dyadic.models import DyadicPoint, Grid2
from walshlab.dyadic.services.averages import cell_means
from walshlab.lab.exceptions import DualCoefficientsError, RationalModeError
from walshlab.lab.models import DualCoefficients


def check_arguments(f: Grid2, alpha: DualCoefficients, x: DyadicPoint, y: DyadicPoint,
                    exact: bool):
    if alpha.n > f.resolution:
        raise DualCoefficientsError(
            f"Block exponent n={alpha.n} exceeds resolution {f.resolution}."
        )
    for point in (x, y):
        if point.resolution != f.resolution:
            raise ResolutionMismatchError(
                f"Point at resolution {point.resolution} used with a grid at {f.resolution}."
            )
    if exact and f.resolution > settings.RATIONAL_MAX_RESOLUTION:
        raise RationalModeError(
            f"Rational mode is limited to resolution {settings.RATIONAL_MAX_RESOLUTION}, "
            f"got {f.resolution}."
        )


def block_cells(f: Grid2, n: int, exact: bool = False) -> np.ndarray:
    """
    Level-n cell values of ``S_{2^n,2^n} f``.

    Every integrand of the duality step is constant on level-n cells, so integrals over the
    group reduce to ``4**-n`` times a sum over these cells.
    """
    if not exact:
        return cell_means(cell_means(f.values, n, axis=0), n, axis=1)
    width = f.size >> n
    values = np.array([Fraction(value) for value in f.values.ravel()], dtype=object)
    blocks = values.reshape(1 << n, width, 1 << n, width).sum(axis=3).sum(axis=1)
    return blocks / (width * width)


def translated(cells: np.ndarray, x: DyadicPoint, y: DyadicPoint) -> np.ndarray:
    """``G[s, t] = g(x + s, y + t)`` on level-n cells."""
    n = cells.shape[0].bit_length() - 1
    shift = x.resolution - n
    codes = np.arange(1 << n)
    return cells[np.ix_(codes ^ (x.code >> shift), codes ^ (y.code >> shift))]


def weighted_traces(alpha: np.ndarray, left: np.ndarray, block: np.ndarray,
                    right: np.ndarray) -> float | Fraction:
    """``Σ_m α_m Σ_{s,t} left[m, s] block[s, t] right[m, t]``."""
    per_m = ((left @ block) * right).sum(axis=1)
    if per_m.dtype == object:
        return sum(alpha * per_m, Fraction(0))
    return float(np.dot(alpha, per_m))
