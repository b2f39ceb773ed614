import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Self, Sequence

import numpy as np

from walshlab.dyadic.exceptions import ResolutionMismatchError
from walshlab.dyadic.models import Grid2
from walshlab.lab.exceptions import DualCoefficientsError, EmptyCorpusError

Number = float | Fraction

J_TERM_NAMES = tuple(f"J{k}" for k in range(1, 10))

# (s-factor, t-factor) of each J_k; P is the translated-character part of Schipp's
# representation, W the -w_m/2 part and E the (m + 1/2)·1_{I_n} part.
J_TERM_FACTORS = (
    ('P', 'P'), ('P', 'W'), ('P', 'E'),
    ('W', 'P'), ('W', 'W'), ('W', 'E'),
    ('E', 'P'), ('E', 'W'), ('E', 'E'),
)


@dataclass(frozen=True, eq=False, slots=True)
class DualCoefficients:
    """Weights ``α_m``, ``m < 2**n``, of the dual kernel ``Σ_m α_m D_m(s) D_m(t)``."""
    n: int
    alpha: tuple[Number, ...]

    def __post_init__(self):
        if self.n < 0:
            raise DualCoefficientsError(f"Block exponent must be non-negative, got {self.n}.")
        alpha = tuple(self.alpha)
        if len(alpha) != 1 << self.n:
            raise DualCoefficientsError(
                f"Expected {1 << self.n} coefficients for n={self.n}, got {len(alpha)}."
            )
        if not all(math.isfinite(value) for value in alpha):
            raise DualCoefficientsError("Dual coefficients must be finite.")
        object.__setattr__(self, 'alpha', alpha)

    @classmethod
    def zeros(cls, n: int) -> Self:
        return cls(n, (0.0,) * (1 << n))

    @classmethod
    def unit(cls, n: int, m: int) -> Self:
        if not 0 <= m < 1 << n:
            raise DualCoefficientsError(f"Index m={m} is out of range for n={n}.")
        return cls(n, tuple(1.0 if index == m else 0.0 for index in range(1 << n)))

    @classmethod
    def optimal(cls, n: int, diagonal_sums: Sequence[float]) -> Self:
        """``α_m = S_{mm} f(x, y) / ‖(S_{mm} f(x, y))_m‖₂``; zero when every sum vanishes."""
        values = np.asarray(diagonal_sums, dtype=np.float64)
        norm = float(np.sqrt(np.sum(values ** 2)))
        if norm == 0:
            return cls.zeros(n)
        return cls(n, tuple(float(value) for value in values / norm))

    def as_array(self) -> np.ndarray:
        if any(isinstance(value, Fraction) for value in self.alpha):
            return np.array(self.alpha, dtype=object)
        return np.array(self.alpha, dtype=np.float64)

    def as_fractions(self) -> np.ndarray:
        return np.array([Fraction(value) for value in self.alpha], dtype=object)

    def l2_norm(self) -> float:
        return math.sqrt(math.fsum(float(value) ** 2 for value in self.alpha))

    def is_admissible(self, tolerance: float = 1e-12) -> bool:
        return self.l2_norm() <= 1 + tolerance


@dataclass(frozen=True, eq=False, slots=True)
class JBreakdown:
    """The nine terms ``J_1..J_9`` at one point next to the direct bilinear form."""
    terms: tuple[Number, ...]
    bilinear: Number
    exact: bool = False

    @property
    def total(self) -> Number:
        if self.exact:
            return sum(self.terms, Fraction(0))
        return math.fsum(self.terms)

    @property
    def residual(self) -> Number:
        return self.total - self.bilinear

    def relative_residual(self) -> float:
        return abs(float(self.residual)) / (1 + abs(float(self.bilinear)))

    def as_dict(self) -> dict[str, float]:
        return {name: float(value) for name, value in zip(J_TERM_NAMES, self.terms)}


def corpus_resolution(corpus: Mapping[str, Grid2]) -> int:
    """Common resolution of a non-empty mapping of grids."""
    if not corpus:
        raise EmptyCorpusError("The corpus holds no functions.")
    resolutions = {f.resolution for f in corpus.values()}
    if len(resolutions) != 1:
        raise ResolutionMismatchError(f"Corpus mixes resolutions {sorted(resolutions)}.")
    return resolutions.pop()
