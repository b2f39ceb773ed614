import numpy as np

from walshlab.config.utils.utils import is_power_of_two
from walshlab.dyadic.models import Grid1, Grid2
from walshlab.strong.exceptions import PhiOverflowError, TermCountError, UnsupportedExponentError
from walshlab.strong.models import PhiSpec, power_magnitude
from walshlab.strong.services.sweeps import iter_diagonal_sums, iter_partial_sums_1d


def check_exponent(p: float) -> float:
    if not 0 < p <= 2:
        raise UnsupportedExponentError(f"Strong means are defined for 0 < p <= 2, got {p}.")
    return p


def _check_terms(n_terms: int):
    if n_terms < 1:
        raise TermCountError(f"At least one term is needed, got {n_terms}.")


def _check_finite(total: np.ndarray, phi: PhiSpec) -> np.ndarray:
    if not np.isfinite(total).all():
        raise PhiOverflowError(f"Φ = {phi} overflows double precision on this function.")
    return total


def pth_root(values: np.ndarray, p: float) -> np.ndarray:
    if p == 1:
        return values
    if p == 2:
        return np.sqrt(values)
    return values ** (1.0 / p)


def block_strong_means(f: Grid2, p: float, n_max: int | None = None,
                       centered: bool = False) -> list[np.ndarray]:
    """
    ``H_n^p f`` for ``n = 0..n_max`` from a single sweep.

    The raw form averages ``|S_{mm} f|**p``; the centered form averages ``|S_{mm} f - f|**p``.
    """
    check_exponent(p)
    n_max = f.resolution if n_max is None else n_max
    if not 0 <= n_max <= f.resolution:
        raise TermCountError(f"Block exponent must lie in [0, {f.resolution}], got {n_max}.")

    total = np.zeros((f.size, f.size))
    means = []
    for m, partial_sum in enumerate(iter_diagonal_sums(f, 1 << n_max)):
        term = partial_sum - f.values if centered else partial_sum
        total += power_magnitude(term, p)
        if is_power_of_two(m + 1):
            means.append(pth_root(total / (m + 1), p))
    return means


def strong_mean(f: Grid2, n: int, p: float, centered: bool = False) -> Grid2:
    """``H_n^p f = (2**-n Σ_{m < 2**n} |S_{mm} f|**p)**(1/p)``."""
    return Grid2(f.resolution, block_strong_means(f, p, n, centered)[n])


def maximal_strong(f: Grid2, p: float, centered: bool = False) -> Grid2:
    """``H_*^p f = max_{n <= N} H_n^p f``."""
    return Grid2(f.resolution, np.maximum.reduce(block_strong_means(f, p, centered=centered)))


def phi_strong_mean(f: Grid2, n_terms: int, phi: PhiSpec) -> Grid2:
    """``(1/n) Σ_{m<n} Φ(|S_{mm} f - f|)``; terms with ``m >= 2**N`` vanish."""
    _check_terms(n_terms)
    total = np.zeros((f.size, f.size))
    with np.errstate(over='ignore'):
        for partial_sum in iter_diagonal_sums(f, min(n_terms, f.size)):
            total += phi.apply(partial_sum - f.values)
    return Grid2(f.resolution, _check_finite(total, phi) / n_terms)


def phi_strong_mean_1d(g: Grid1, n_terms: int, phi: PhiSpec) -> Grid1:
    """One-dimensional form with the ordinary partial sums ``S_m g``."""
    _check_terms(n_terms)
    total = np.zeros(g.size)
    with np.errstate(over='ignore'):
        for partial_sum in iter_partial_sums_1d(g, min(n_terms, g.size)):
            total += phi.apply(partial_sum - g.values)
    return Grid1(g.resolution, _check_finite(total, phi) / n_terms)


def marcinkiewicz_mean(f: Grid2, n_terms: int) -> Grid2:
    """``(1/n) Σ_{j<n} S_{jj} f``."""
    _check_terms(n_terms)
    total = np.zeros((f.size, f.size))
    for partial_sum in iter_diagonal_sums(f, min(n_terms, f.size)):
        total += partial_sum
    if n_terms > f.size:
        total += (n_terms - f.size) * f.values
    return Grid2(f.resolution, total / n_terms)
