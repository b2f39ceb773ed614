from dataclasses import dataclass
from typing import Callable, Iterator, Literal, Optional, Self, TypeAlias

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from walshlab.config.utils.utils import format_number
from walshlab.dyadic.models import Grid2
from walshlab.strong.exceptions import InvalidPhiSpecError

PhiKind: TypeAlias = Literal['pow', 'exp']


def power_magnitude(values: np.ndarray, p: float) -> np.ndarray:
    """``|values|**p``; fractional powers go through ``exp(p·ln|v|)`` with ``|v| = 0`` kept at 0."""
    magnitudes = np.abs(values)
    if p == 1:
        return magnitudes
    if p == 2:
        return magnitudes * magnitudes
    result = np.zeros_like(magnitudes)
    positive = magnitudes > 0
    result[positive] = np.exp(p * np.log(magnitudes[positive]))
    return result


class PhiSpec(BaseModel):
    """``Φ(t) = t**parameter`` (``pow``) or ``Φ(t) = exp(parameter·t) - 1`` (``exp``)."""
    model_config = ConfigDict(frozen=True)

    kind: PhiKind
    parameter: float = Field(gt=0, allow_inf_nan=False)

    @classmethod
    def parse(cls, text: str) -> Self:
        kind, separator, raw = text.strip().partition(':')
        if not separator:
            raise InvalidPhiSpecError(f"Expected 'pow:p' or 'exp:A', got {text!r}.")
        try:
            return cls(kind=kind, parameter=float(raw))
        except (ValueError, ValidationError) as error:
            raise InvalidPhiSpecError(f"Invalid Φ spec {text!r}: {error}") from error

    def apply(self, t: np.ndarray) -> np.ndarray:
        if self.kind == 'pow':
            return power_magnitude(t, self.parameter)
        return np.expm1(self.parameter * np.abs(t))

    def __str__(self) -> str:
        return f"{self.kind}:{format_number(self.parameter)}"


@dataclass(frozen=True, eq=False, slots=True)
class DiagonalSweep:
    """
    The quadratic partial sums ``S_{mm} f`` for ``0 <= m < m_max``.

    Small resolutions keep every grid in ``stored``; at and above the streaming threshold
    ``stored`` is ``None`` and iteration recomputes the sums incrementally.
    """
    f: Grid2
    m_max: int
    stream: Callable[[], Iterator[np.ndarray]]
    stored: Optional[tuple[np.ndarray, ...]] = None

    @property
    def resolution(self) -> int:
        return self.f.resolution

    @property
    def streaming(self) -> bool:
        return self.stored is None

    def __len__(self) -> int:
        return self.m_max

    def __iter__(self) -> Iterator[np.ndarray]:
        if self.stored is not None:
            return iter(self.stored)
        return self.stream()

    def __getitem__(self, m: int) -> Grid2:
        if not 0 <= m < self.m_max:
            raise IndexError(f"Sweep holds m < {self.m_max}, got {m}.")
        if self.stored is not None:
            return Grid2(self.resolution, self.stored[m])
        for index, values in enumerate(self.stream()):
            if index == m:
                return Grid2(self.resolution, values)
        raise IndexError(m)
