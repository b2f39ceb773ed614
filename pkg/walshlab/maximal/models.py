from dataclasses import dataclass
from typing import Self

import numpy as np

from walshlab.dyadic.services.averages import expand
from walshlab.maximal.exceptions import LevelOutOfRangeError


def _pair_sums(values: np.ndarray, axis: int) -> np.ndarray:
    data = np.moveaxis(values, axis, 0)
    summed = data.reshape(data.shape[0] // 2, 2, *data.shape[1:]).sum(axis=1)
    return np.moveaxis(summed, 0, axis)


@dataclass(frozen=True, eq=False, slots=True)
class CellPyramid:
    """
    Dyadic cell sums at every level ``0..resolution``.

    Cells are refined along ``axes`` only, so ``axes=(0, 1)`` gives square cells and a single
    axis gives the rectangular pyramids behind the hybrid operators. ``sums[n]`` holds the
    level-n cell sums; each entry is the sum of its children at level ``n + 1`` and
    ``sums[resolution]`` is the grid itself.
    """
    resolution: int
    axes: tuple[int, ...]
    sums: tuple[np.ndarray, ...]

    @classmethod
    def build(cls, values: np.ndarray, axes: tuple[int, ...] = (0,)) -> Self:
        values = np.array(values, dtype=np.float64)
        resolution = values.shape[axes[0]].bit_length() - 1
        levels = [values]
        for _ in range(resolution):
            coarser = levels[-1]
            for axis in axes:
                coarser = _pair_sums(coarser, axis)
            levels.append(coarser)
        for level in levels:
            level.setflags(write=False)
        return cls(resolution, tuple(axes), tuple(reversed(levels)))

    def _check_level(self, level: int):
        if not 0 <= level <= self.resolution:
            raise LevelOutOfRangeError(
                f"Level {level} is out of range [0, {self.resolution}]."
            )

    def cell_averages(self, level: int) -> np.ndarray:
        """Averages over level-``level`` cells, one entry per cell."""
        self._check_level(level)
        children = 1 << ((self.resolution - level) * len(self.axes))
        return self.sums[level] / children

    def average(self, level: int) -> np.ndarray:
        """Level-``level`` averages repeated up to full resolution."""
        result = self.cell_averages(level)
        for axis in self.axes:
            result = expand(result, self.resolution, axis)
        return result

    def maximal(self, absolute: bool = True) -> np.ndarray:
        """Pointwise ``max`` over levels of the (absolute) cell average."""
        best = None
        for level in range(self.resolution + 1):
            average = self.average(level)
            if absolute:
                average = np.abs(average)
            best = average if best is None else np.maximum(best, average)
        return best
