from dataclasses import dataclass
from fractions import Fraction
from typing import Self

import numpy as np

from walshlab.kernels.exceptions import SchippPreconditionError


@dataclass(frozen=True, slots=True, order=True)
class HalfInteger:
    """Exact value ``doubled / 2``."""
    doubled: int

    @classmethod
    def from_int(cls, value: int) -> Self:
        return cls(2 * value)

    @classmethod
    def power_of_two(cls, exponent: int) -> Self:
        """``2**exponent`` for ``exponent >= -1``."""
        if exponent < -1:
            raise SchippPreconditionError(f"2**{exponent} is not a half-integer.")
        return cls(1 << (exponent + 1))

    def __add__(self, other: 'HalfInteger | int') -> 'HalfInteger':
        if isinstance(other, int):
            other = HalfInteger.from_int(other)
        if not isinstance(other, HalfInteger):
            return NotImplemented
        return HalfInteger(self.doubled + other.doubled)

    __radd__ = __add__

    def __sub__(self, other: 'HalfInteger | int') -> 'HalfInteger':
        if isinstance(other, int):
            other = HalfInteger.from_int(other)
        if not isinstance(other, HalfInteger):
            return NotImplemented
        return HalfInteger(self.doubled - other.doubled)

    def __neg__(self) -> 'HalfInteger':
        return HalfInteger(-self.doubled)

    def __mul__(self, other: int) -> 'HalfInteger':
        if not isinstance(other, int):
            return NotImplemented
        return HalfInteger(self.doubled * other)

    __rmul__ = __mul__

    def as_fraction(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def __float__(self) -> float:
        return self.doubled / 2

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.doubled == 2 * other
        if isinstance(other, HalfInteger):
            return self.doubled == other.doubled
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __str__(self) -> str:
        return str(self.as_fraction())


@dataclass(frozen=True, eq=False, slots=True)
class SchippParts:
    """
    Doubled integer components of Schipp's representation of ``D_m`` over one level.

    ``translated`` is the ``ε``-weighted sum of translated characters, ``character`` the
    ``w_m`` term that enters with weight ``-1/2`` and ``boundary`` the ``(m + 1/2)·1_{I_n}``
    term, all multiplied by two.
    """
    m: int
    n: int
    resolution: int
    translated: np.ndarray
    character: np.ndarray
    boundary: np.ndarray

    @property
    def doubled(self) -> np.ndarray:
        return self.translated - self.character + self.boundary

    def at(self, code: int) -> HalfInteger:
        return HalfInteger(int(self.doubled[code]))
