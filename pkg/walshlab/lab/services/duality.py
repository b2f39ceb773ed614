import logging
import math
from functools import lru_cache

import numpy as np

from walshlab.config import settings
from walshlab.dyadic.models import DyadicPoint, Grid2
from walshlab.dyadic.services.walsh import walsh_matrix
from walshlab.lab.exceptions import DualCoefficientsError
from walshlab.lab.models import DualCoefficients, Number
from walshlab.lab.schemes import DualityCheck
from walshlab.lab.services.cells import block_cells, check_arguments, translated, weighted_traces
from walshlab.lab.services.pool import map_ordered
from walshlab.reports.schemes import ExperimentReport, Provenance
from walshlab.strong.services.sweeps import iter_diagonal_sums

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def dirichlet_matrix(n: int) -> np.ndarray:
    """``D[m, s] = D_m(s)`` for ``m < 2**n`` on level-n cells, int64."""
    characters = walsh_matrix(n)
    kernels = np.zeros_like(characters)
    kernels[1:] = np.cumsum(characters, axis=0)[:-1]
    kernels.setflags(write=False)
    return kernels


def bilinear_form(f: Grid2, alpha: DualCoefficients, x: DyadicPoint, y: DyadicPoint,
                  exact: bool = False) -> Number:
    """
    ``∬ S_{2^n,2^n} f(x + s, y + t) Σ_m α_m D_m(s) D_m(t) dμ(s, t)``.

    With ``exact=True`` the sum runs over fractions and the result is a ``Fraction``.
    """
    check_arguments(f, alpha, x, y, exact)
    n = alpha.n
    block = translated(block_cells(f, n, exact), x, y)
    kernels = dirichlet_matrix(n)
    if exact:
        kernels = kernels.astype(object)
        weights = alpha.as_fractions()
    else:
        kernels = kernels.astype(np.float64)
        weights = alpha.as_array()
    return weighted_traces(weights, kernels, block, kernels) / (1 << (2 * n))


def _diagonal_sums(f: Grid2, n: int) -> np.ndarray:
    """``S_{mm} f`` for ``m < 2**n`` stacked along axis 0."""
    if not 0 <= n <= f.resolution:
        raise DualCoefficientsError(f"Block exponent n={n} exceeds resolution {f.resolution}.")
    return np.stack(list(iter_diagonal_sums(f, 1 << n)))


def _check_at(f: Grid2, n: int, sums: np.ndarray, x: DyadicPoint, y: DyadicPoint) -> DualityCheck:
    lhs = math.sqrt(math.fsum(value ** 2 for value in sums))
    rhs = float(bilinear_form(f, DualCoefficients.optimal(n, sums), x, y))
    relative_error = abs(lhs - rhs) / lhs if lhs > 0 else abs(rhs)
    return DualityCheck(
        x=x.code, y=y.code, n=n, lhs=lhs, rhs=rhs, relative_error=relative_error,
        passed=relative_error <= settings.DUALITY_TOLERANCE,
    )


def duality_check(f: Grid2, n: int, x: DyadicPoint, y: DyadicPoint) -> DualityCheck:
    """Cauchy-Schwarz equality at the optimal ``α``: ``(Σ_m |S_{mm} f(x, y)|²)^{1/2}`` vs the form."""
    sums = _diagonal_sums(f, n)[:, x.code, y.code]
    return _check_at(f, n, sums, x, y)


def duality_report(f: Grid2, n: int) -> ExperimentReport:
    """:func:`duality_check` at every point, one sweep shared by all of them."""
    sums = _diagonal_sums(f, n)
    resolution = f.resolution

    def check_row(code: int) -> list[DualityCheck]:
        x = DyadicPoint(code, resolution)
        return [
            _check_at(f, n, sums[:, code, other], x, DyadicPoint(other, resolution))
            for other in range(f.size)
        ]

    checks = [check for row in map_ordered(check_row, range(f.size)) for check in row]
    failures = [check for check in checks if not check.passed]
    if failures:
        logger.warning("Duality check fails", extra={'n': n, 'failures': len(failures)})
    return ExperimentReport(
        experiment='duality',
        config={'n': n},
        rows=[check.model_dump() for check in checks],
        summary={
            'checked': len(checks),
            'passed': len(checks) - len(failures),
            'max_relative_error': max(check.relative_error for check in checks),
            'ok': not failures,
        },
        provenance=Provenance(resolution=resolution),
    )
