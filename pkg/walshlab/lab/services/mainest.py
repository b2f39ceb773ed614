import logging
from typing import Mapping

import numpy as np

from walshlab.dyadic.models import Grid2
from walshlab.dyadic.services.norms import llogl_functional, norm_p
from walshlab.lab.models import corpus_resolution
from walshlab.lab.services.pool import map_ordered
from walshlab.maximal.services import MaximalOperators
from walshlab.reports.schemes import ExperimentReport, Provenance
from walshlab.schipp.services import v_hybrid_sup
from walshlab.strong.services.means import block_strong_means

logger = logging.getLogger(__name__)


def mainest_bound(f: Grid2) -> np.ndarray:
    """
    ``V₂(M₁f) + V₁(M₂f) + Mf + V₂(A) + V₁(A) + ‖f‖₁`` pointwise.

    ``M`` averages ``|f|``; both ``V`` operators take the supremum over levels.
    """
    operators = MaximalOperators(f)
    diagonal = operators.diagonal_maximal()
    return (
        v_hybrid_sup(operators.hybrid(1), 2).values
        + v_hybrid_sup(operators.hybrid(2), 1).values
        + operators.dyadic(absolute_inside=True).values
        + v_hybrid_sup(diagonal, 2).values
        + v_hybrid_sup(diagonal, 1).values
        + norm_p(f, 1)
    )


def _ratio(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return np.divide(lhs, rhs, out=np.zeros_like(lhs), where=rhs > 0)


def mainest_ratio(f: Grid2) -> ExperimentReport:
    """
    Distribution over points of ``(2**-n Σ_{m<2**n} |S_{mm} f|²)^{1/2}`` divided by
    :func:`mainest_bound`, one row per block exponent ``n <= N``.
    """
    rhs = mainest_bound(f)
    rows = []
    for n, lhs in enumerate(block_strong_means(f, 2)):
        ratio = _ratio(lhs, rhs)
        rows.append({
            'n': n,
            'max_ratio': float(ratio.max()),
            'mean_ratio': float(ratio.mean()),
            'median_ratio': float(np.median(ratio)),
            'p99_ratio': float(np.quantile(ratio, 0.99)),
        })
    worst = max(rows, key=lambda row: row['max_ratio'])
    logger.info("Core estimate ratios computed", extra={'max_ratio': worst['max_ratio']})
    return ExperimentReport(
        experiment='mainest',
        config={'p': 2},
        rows=rows,
        summary={'max_ratio': worst['max_ratio'], 'argmax_n': worst['n'], 'norm_l1': norm_p(f, 1)},
        provenance=Provenance(resolution=f.resolution),
    )


def maximal_bound_report(corpus: Mapping[str, Grid2]) -> ExperimentReport:
    """
    ``‖Mf‖₁``, ``‖M₁f‖₁``, ``‖M₂f‖₁`` and ``‖A‖₁`` against ``1 + ∬|f| log⁺|f|`` for each
    corpus member.
    """
    resolution = corpus_resolution(corpus)

    def measure(item: tuple[str, Grid2]) -> dict:
        name, f = item
        operators = MaximalOperators(f)
        bound = 1 + llogl_functional(f)
        norms = {
            'm_norm': norm_p(operators.dyadic(absolute_inside=True), 1),
            'm1_norm': norm_p(operators.hybrid(1), 1),
            'm2_norm': norm_p(operators.hybrid(2), 1),
            'a_norm': norm_p(operators.diagonal_maximal(), 1),
        }
        return {'spec': name, 'bound': bound, **norms, 'max_ratio': max(norms.values()) / bound}

    rows = map_ordered(measure, corpus.items())
    return ExperimentReport(
        experiment='maximal_bounds',
        config={'functions': list(corpus)},
        rows=rows,
        summary={'corpus_max': max(row['max_ratio'] for row in rows)},
        provenance=Provenance(resolution=resolution),
    )
