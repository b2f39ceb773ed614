from functools import cached_property

import numpy as np

from walshlab.dyadic.models import Grid1, Grid2
from walshlab.dyadic.services.averages import resolve_axis
from walshlab.maximal.exceptions import LevelOutOfRangeError
from walshlab.maximal.models import CellPyramid


def shear(f: Grid2) -> Grid2:
    """``F₂(u, v) = f(u, v + u)``; an involution on cells."""
    return Grid2(f.resolution, _shear_values(f.values))


def _shear_values(values: np.ndarray) -> np.ndarray:
    codes = np.arange(values.shape[0])
    return values[codes[:, None], codes[:, None] ^ codes[None, :]]


class MaximalOperators:
    """
    Maximal operators of one grid sharing their pyramids.

    Each pyramid is built on first use and reused by every operator that needs it.
    """

    def __init__(self, f: Grid2):
        self.f = f

    @cached_property
    def _square(self) -> CellPyramid:
        return CellPyramid.build(self.f.values, axes=(0, 1))

    @cached_property
    def _square_of_modulus(self) -> CellPyramid:
        return CellPyramid.build(np.abs(self.f.values), axes=(0, 1))

    @cached_property
    def _rows_of_modulus(self) -> CellPyramid:
        return CellPyramid.build(np.abs(self.f.values), axes=(0,))

    @cached_property
    def _columns_of_modulus(self) -> CellPyramid:
        return CellPyramid.build(np.abs(self.f.values), axes=(1,))

    @cached_property
    def _sheared_rows_of_modulus(self) -> CellPyramid:
        return CellPyramid.build(np.abs(_shear_values(self.f.values)), axes=(0,))

    def dyadic(self, absolute_inside: bool = False) -> Grid2:
        if absolute_inside:
            return Grid2(self.f.resolution, self._square_of_modulus.maximal(absolute=False))
        return Grid2(self.f.resolution, self._square.maximal(absolute=True))

    def hybrid(self, axis: int) -> Grid2:
        pyramid = self._rows_of_modulus if resolve_axis(axis) == 0 else self._columns_of_modulus
        return Grid2(self.f.resolution, pyramid.maximal(absolute=False))

    def diagonal_average(self, j: int) -> Grid2:
        if not 0 <= j <= self.f.resolution:
            raise LevelOutOfRangeError(
                f"Diagonal level {j} is out of range [0, {self.f.resolution}]."
            )
        return Grid2(self.f.resolution, _shear_values(self._sheared_rows_of_modulus.average(j)))

    def diagonal_maximal(self) -> Grid2:
        return Grid2(
            self.f.resolution, _shear_values(self._sheared_rows_of_modulus.maximal(absolute=False))
        )


def dyadic_maximal(f: Grid2, absolute_inside: bool = False) -> Grid2:
    """
    ``Mf(x, y) = max_n |4**n ∫_{I_n × I_n} f(x + s, y + t)|``.

    With ``absolute_inside`` the modulus is taken before averaging, which is the form that
    bounds averages of ``|f|``.
    """
    return MaximalOperators(f).dyadic(absolute_inside)


def hybrid_maximal(f: Grid2, axis: int) -> Grid2:
    """``M₁f`` (``axis=1``) or ``M₂f`` (``axis=2``), modulus inside."""
    return MaximalOperators(f).hybrid(axis)


def diagonal_average(f: Grid2, j: int) -> Grid2:
    """``A_j(x, y) = 2**j ∫_{I_j} |f(x + s, y + s)| dμ(s)``."""
    return MaximalOperators(f).diagonal_average(j)


def diagonal_maximal(f: Grid2) -> Grid2:
    return MaximalOperators(f).diagonal_maximal()


def dyadic_maximal_1d(g: Grid1, absolute_inside: bool = False) -> Grid1:
    values = np.abs(g.values) if absolute_inside else g.values
    return Grid1(g.resolution, CellPyramid.build(values).maximal(absolute=not absolute_inside))
