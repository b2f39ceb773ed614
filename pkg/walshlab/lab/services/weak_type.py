import logging
from enum import Enum, auto
from typing import Mapping, Sequence

import numpy as np

from walshlab.config import settings
from walshlab.dyadic.models import Grid2
from walshlab.dyadic.services.norms import llogl_functional, norm_p
from walshlab.lab.exceptions import InvalidLambdaGridError
from walshlab.lab.models import corpus_resolution
from walshlab.lab.services.pool import map_ordered
from walshlab.maximal.services import MaximalOperators
from walshlab.reports.schemes import ExperimentReport, Provenance
from walshlab.schipp.services import v_hybrid_sup
from walshlab.strong.services.means import check_exponent, maximal_strong

logger = logging.getLogger(__name__)


class WeakOperator(Enum):
    @staticmethod
    def _generate_next_value_(name, start, count, last_values) -> str:
        return name.lower()

    # Strong means
    HSTAR: str = auto()
    # Schipp square functions in one variable
    V: str = auto()
    V2: str = auto()
    # Dyadic maximal functions
    M: str = auto()
    M1: str = auto()
    M2: str = auto()
    # Schipp square functions of the hybrid maximal functions
    V_M2: str = auto()
    V2_M1: str = auto()

    def source(self, f: Grid2) -> Grid2:
        """The function whose ``L¹`` norm bounds the weak type of the operator."""
        match self:
            case WeakOperator.V_M2:
                return MaximalOperators(f).hybrid(2)
            case WeakOperator.V2_M1:
                return MaximalOperators(f).hybrid(1)
            case _:
                return f

    def apply(self, f: Grid2, p: float = 2.0) -> np.ndarray:
        match self:
            case WeakOperator.HSTAR:
                return maximal_strong(f, p).values
            case WeakOperator.V:
                return v_hybrid_sup(f, 1).values
            case WeakOperator.V2:
                return v_hybrid_sup(f, 2).values
            case WeakOperator.M:
                return MaximalOperators(f).dyadic(absolute_inside=True).values
            case WeakOperator.M1:
                return MaximalOperators(f).hybrid(1).values
            case WeakOperator.M2:
                return MaximalOperators(f).hybrid(2).values
            case WeakOperator.V_M2:
                return v_hybrid_sup(self.source(f), 1).values
            case WeakOperator.V2_M1:
                return v_hybrid_sup(self.source(f), 2).values

    def denominator(self, f: Grid2) -> float:
        """``1 + ∬|f| log⁺|f|`` for the strong means, the ``L¹`` norm of the source otherwise."""
        if self is WeakOperator.HSTAR:
            return 1 + llogl_functional(f)
        return norm_p(self.source(f), 1)


def check_lambda_grid(lambda_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(lambda_grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise InvalidLambdaGridError("The λ grid must be a non-empty sequence.")
    if not np.all(np.isfinite(grid)) or grid[0] <= 0 or np.any(np.diff(grid) <= 0):
        raise InvalidLambdaGridError("The λ grid must be positive, finite and strictly ascending.")
    return grid


def default_lambda_grid(values: np.ndarray) -> np.ndarray | None:
    """Log-spaced grid around the median of ``values``; ``None`` when ``values`` vanish."""
    centre = float(np.median(values))
    if centre <= 0:
        centre = float(values.max())
    if centre <= 0:
        return None
    low, high = settings.LAMBDA_GRID_SPAN
    return np.geomspace(low * centre, high * centre, settings.LAMBDA_GRID_POINTS)


def distribution_table(values: np.ndarray, lambda_grid: Sequence[float]) -> np.ndarray:
    """``μ{T > λ}`` for each ``λ`` of the grid, cells weighted equally."""
    grid = check_lambda_grid(lambda_grid)
    ordered = np.sort(np.ravel(values))
    above = ordered.size - np.searchsorted(ordered, grid, side='right')
    return above / ordered.size


def _sup_constant(operator: WeakOperator, f: Grid2, lambda_grid: np.ndarray | None,
                  p: float) -> tuple[float, float | None]:
    values = operator.apply(f, p)
    grid = default_lambda_grid(values) if lambda_grid is None else lambda_grid
    denominator = operator.denominator(f)
    if grid is None or denominator <= 0:
        return 0.0, None
    products = grid * distribution_table(values, grid) / denominator
    best = int(np.argmax(products))
    return float(products[best]), float(grid[best])


def weak_type_constant(operator: WeakOperator, corpus: Mapping[str, Grid2],
                       lambda_grid: Sequence[float] | None = None,
                       p: float = 2.0) -> ExperimentReport:
    """
    Empirical weak-type constant ``sup_λ λ·μ{Tf > λ} / denominator`` per corpus member.

    Without an explicit grid each member gets its own log-spaced grid around the median of
    ``Tf``.
    """
    resolution = corpus_resolution(corpus)
    if operator is WeakOperator.HSTAR:
        check_exponent(p)
    grid = None if lambda_grid is None else check_lambda_grid(lambda_grid)

    def measure(item: tuple[str, Grid2]) -> dict:
        name, f = item
        constant, argmax = _sup_constant(operator, f, grid, p)
        return {'spec': name, 'sup_constant': constant, 'argmax_lambda': argmax}

    per_function = map_ordered(measure, corpus.items())
    corpus_max = max(row['sup_constant'] for row in per_function)
    logger.info("Weak-type constants measured",
                extra={'operator': operator.value, 'corpus_max': corpus_max})
    return ExperimentReport(
        experiment='weak_type',
        config={
            'operator': operator.value,
            'p': p,
            'lambda_grid': 'default' if grid is None else [float(value) for value in grid],
        },
        rows=per_function,
        rows_key='per_function',
        summary={'operator': operator.value, 'resolution': resolution, 'corpus_max': corpus_max},
        provenance=Provenance(resolution=resolution),
    )
