from dataclasses import dataclass
from typing import ClassVar, Self, Sequence

import numpy as np

from walshlab.config import settings
from walshlab.dyadic.exceptions import (
    CoordinateOutOfRangeError,
    GridFormatError,
    NonFiniteValuesError,
    OutOfRangeError,
    PointOutOfRangeError,
    ResolutionError,
    ResolutionMismatchError,
)


def check_resolution(resolution: int) -> int:
    if not 0 <= resolution <= settings.MAX_RESOLUTION:
        raise ResolutionError(
            f"Resolution must lie in [0, {settings.MAX_RESOLUTION}], got {resolution}."
        )
    return resolution


@dataclass(frozen=True, slots=True)
class DyadicPoint:
    """
    Element of the dyadic group truncated to ``resolution`` coordinates.

    Coordinate ``x_k`` is bit ``resolution - 1 - k`` of ``code``, so the dyadic interval
    ``I_n(x)`` is the run of codes sharing the top ``n`` bits and ``code / 2**resolution``
    is the embedding into [0, 1).
    """
    code: int
    resolution: int

    def __post_init__(self):
        check_resolution(self.resolution)
        if not 0 <= self.code < 1 << self.resolution:
            raise PointOutOfRangeError(
                f"Point code {self.code} does not fit resolution {self.resolution}."
            )

    @classmethod
    def unit(cls, j: int, resolution: int) -> Self:
        """The point ``e_j``: only coordinate ``j`` is set."""
        if not 0 <= j < resolution:
            raise CoordinateOutOfRangeError(f"e_{j} does not exist at resolution {resolution}.")
        return cls(1 << (resolution - 1 - j), resolution)

    @classmethod
    def from_coordinates(cls, coordinates: Sequence[int]) -> Self:
        code = 0
        for bit in coordinates:
            if bit not in (0, 1):
                raise PointOutOfRangeError(f"Coordinates must be 0 or 1, got {bit}.")
            code = (code << 1) | bit
        return cls(code, len(coordinates))

    def coordinate(self, k: int) -> int:
        if not 0 <= k < self.resolution:
            raise CoordinateOutOfRangeError(
                f"Coordinate {k} does not exist at resolution {self.resolution}."
            )
        return (self.code >> (self.resolution - 1 - k)) & 1

    def coordinates(self) -> tuple[int, ...]:
        return tuple(self.coordinate(k) for k in range(self.resolution))

    def _check_level(self, n: int):
        if not 0 <= n <= self.resolution:
            raise OutOfRangeError(f"Level {n} exceeds resolution {self.resolution}.")

    def interval(self, n: int) -> range:
        """Codes of ``I_n(x)``."""
        self._check_level(n)
        width = 1 << (self.resolution - n)
        start = (self.code // width) * width
        return range(start, start + width)

    def in_null_interval(self, n: int) -> bool:
        """Whether the point lies in ``I_n`` = ``I_n(0)``."""
        self._check_level(n)
        return self.code >> (self.resolution - n) == 0

    def embed(self) -> float:
        return self.code / (1 << self.resolution)

    def __add__(self, other: 'DyadicPoint') -> 'DyadicPoint':
        if not isinstance(other, DyadicPoint):
            return NotImplemented
        if other.resolution != self.resolution:
            raise ResolutionMismatchError(
                f"Cannot add points at resolutions {self.resolution} and {other.resolution}."
            )
        return DyadicPoint(self.code ^ other.code, self.resolution)

    __sub__ = __add__


def _frozen_values(resolution: int, values, ndim: int, label: str) -> np.ndarray:
    check_resolution(resolution)
    size = 1 << resolution
    array = np.array(values, dtype=np.float64)
    if ndim == 2 and array.ndim == 1 and array.size == size * size:
        array = array.reshape(size, size)
    if array.shape != (size,) * ndim:
        raise GridFormatError(
            f"{label} at resolution {resolution} needs shape {(size,) * ndim}, got {array.shape}."
        )
    if not np.isfinite(array).all():
        raise NonFiniteValuesError(f"{label} values must all be finite.")
    array.setflags(write=False)
    return array


class _Lattice:
    """Shared behaviour of grids and spectra: immutable float64 values at a fixed resolution."""
    __slots__ = ()
    ndim: ClassVar[int]

    resolution: int
    values: np.ndarray

    @property
    def size(self) -> int:
        return 1 << self.resolution

    @classmethod
    def zeros(cls, resolution: int) -> Self:
        size = 1 << check_resolution(resolution)
        return cls(resolution, np.zeros((size,) * cls.ndim))

    @classmethod
    def constant(cls, resolution: int, value: float) -> Self:
        size = 1 << check_resolution(resolution)
        return cls(resolution, np.full((size,) * cls.ndim, float(value)))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(resolution={self.resolution})"


@dataclass(frozen=True, eq=False, slots=True, repr=False)
class Grid1(_Lattice):
    """Function on G stored as its level-N cell averages, indexed by point code."""
    resolution: int
    values: np.ndarray
    ndim: ClassVar[int] = 1

    def __post_init__(self):
        object.__setattr__(self, 'values', _frozen_values(self.resolution, self.values, 1, 'Grid1'))

    def integral(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True, eq=False, slots=True, repr=False)
class Grid2(_Lattice):
    """Function on G x G; ``values[x_code, y_code]`` is the average over the level-N square cell."""
    resolution: int
    values: np.ndarray
    ndim: ClassVar[int] = 2

    def __post_init__(self):
        object.__setattr__(self, 'values', _frozen_values(self.resolution, self.values, 2, 'Grid2'))

    def integral(self) -> float:
        return float(self.values.mean())

    def at(self, x: DyadicPoint, y: DyadicPoint) -> float:
        if x.resolution != self.resolution or y.resolution != self.resolution:
            raise ResolutionMismatchError("Evaluation points must match the grid resolution.")
        return float(self.values[x.code, y.code])


@dataclass(frozen=True, eq=False, slots=True, repr=False)
class Spectrum1(_Lattice):
    """Walsh-Fourier coefficients indexed by frequency."""
    resolution: int
    values: np.ndarray
    ndim: ClassVar[int] = 1

    def __post_init__(self):
        object.__setattr__(
            self, 'values', _frozen_values(self.resolution, self.values, 1, 'Spectrum1')
        )

    @property
    def coeffs(self) -> np.ndarray:
        return self.values

    def energy(self) -> float:
        return float(np.sum(self.values ** 2))


@dataclass(frozen=True, eq=False, slots=True, repr=False)
class Spectrum2(_Lattice):
    """Coefficients ``coeffs[i, j]`` of the double Walsh-Fourier series."""
    resolution: int
    values: np.ndarray
    ndim: ClassVar[int] = 2

    def __post_init__(self):
        object.__setattr__(
            self, 'values', _frozen_values(self.resolution, self.values, 2, 'Spectrum2')
        )

    @property
    def coeffs(self) -> np.ndarray:
        return self.values

    def energy(self) -> float:
        return float(np.sum(self.values ** 2))


Grid = Grid1 | Grid2
