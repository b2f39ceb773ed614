import numpy as np

from walshlab.dyadic.exceptions import InvalidAxisError, OutOfRangeError


def resolve_axis(axis: int) -> int:
    """Maps the variable number used in formulas (1 for x, 2 for y) to an array axis."""
    if axis not in (1, 2):
        raise InvalidAxisError(f"Axis must be 1 or 2, got {axis!r}.")
    return axis - 1


def cell_means(values: np.ndarray, level: int, axis: int = 0) -> np.ndarray:
    """Averages over the ``2**level`` dyadic cells of the given array axis."""
    data = np.moveaxis(np.asarray(values), axis, 0)
    size = data.shape[0]
    resolution = size.bit_length() - 1
    if not 0 <= level <= resolution:
        raise OutOfRangeError(f"Level {level} exceeds resolution {resolution}.")
    means = data.reshape(1 << level, size >> level, *data.shape[1:]).mean(axis=1)
    return np.moveaxis(means, 0, axis)


def expand(means: np.ndarray, resolution: int, axis: int = 0) -> np.ndarray:
    """Repeats level-n cell values back up to ``resolution`` along ``axis``."""
    width = (1 << resolution) // means.shape[axis]
    return np.repeat(means, width, axis=axis)


def block_average(values: np.ndarray, level: int, axis: int = 0) -> np.ndarray:
    """Conditional expectation onto level-``level`` cells along ``axis``, same shape as input."""
    values = np.asarray(values)
    resolution = values.shape[axis].bit_length() - 1
    return expand(cell_means(values, level, axis), resolution, axis)
