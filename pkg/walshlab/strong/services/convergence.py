import logging
import math
from typing import Sequence

import numpy as np

from walshlab.dyadic.models import Grid2
from walshlab.reports.schemes import ExperimentReport, Provenance
from walshlab.strong.exceptions import TermCountError
from walshlab.strong.models import power_magnitude
from walshlab.strong.services.means import pth_root, check_exponent
from walshlab.strong.services.sweeps import iter_diagonal_sums

logger = logging.getLogger(__name__)


def centered_strong_errors(f: Grid2, p: float, n_list: Sequence[int]) -> dict[int, np.ndarray]:
    """
    ``(1/n Σ_{m<n} |S_{mm} f - f|**p)**(1/p)`` for every ``n`` in ``n_list`` from one sweep.

    The sweep stops at ``min(max(n_list), 2**N)``: later terms are zero.
    """
    check_exponent(p)
    targets = sorted(set(n_list))
    if not targets or targets[0] < 1:
        raise TermCountError(f"Term counts must be positive, got {list(n_list)}.")

    total = np.zeros((f.size, f.size))
    errors: dict[int, np.ndarray] = {}
    pending = iter(targets)
    target = next(pending)
    for m, partial_sum in enumerate(iter_diagonal_sums(f, min(targets[-1], f.size))):
        total += power_magnitude(partial_sum - f.values, p)
        while target is not None and m + 1 == target:
            errors[target] = pth_root(total / target, p)
            target = next(pending, None)
    while target is not None:
        errors[target] = pth_root(total / target, p)
        target = next(pending, None)
    return errors


def _slope(n_values: Sequence[int], errors: Sequence[float]) -> float | None:
    points = [(math.log(n), math.log(e)) for n, e in zip(n_values, errors) if e > 0]
    if len(points) < 2:
        return None
    x, y = np.array(points).T
    return float(np.polyfit(x, y, 1)[0])


def convergence_report(f: Grid2, p: float, n_list: Sequence[int],
                       fit_from: int = 1) -> ExperimentReport:
    """
    Decay table of the centered strong means.

    Rows carry ``n``, the sup and L1 norms of the error and the local log-log slope against the
    previous row. The summary slope is a least-squares fit over rows with ``n >= fit_from`` and a
    positive sup error.
    """
    errors = centered_strong_errors(f, p, n_list)
    rows = []
    previous = None
    for n, error in errors.items():
        sup_error = float(error.max())
        l1_error = float(error.mean())
        slope = None
        if previous is not None and previous[1] > 0 and sup_error > 0:
            slope = math.log(sup_error / previous[1]) / math.log(n / previous[0])
        rows.append({'n': n, 'sup_error': sup_error, 'l1_error': l1_error, 'slope': slope})
        previous = (n, sup_error)

    fitted = [row for row in rows if row['n'] >= fit_from]
    summary = {
        'p': p,
        'slope': _slope([row['n'] for row in fitted], [row['sup_error'] for row in fitted]),
        'expected_slope': -1.0 / p,
        'fit_from': fit_from,
    }
    logger.info("Convergence table computed", extra={'p': p, 'slope': summary['slope']})
    return ExperimentReport(
        experiment='strong_means',
        config={'p': p, 'n': list(errors), 'centered': True},
        rows=rows,
        summary=summary,
        provenance=Provenance(resolution=f.resolution),
    )
