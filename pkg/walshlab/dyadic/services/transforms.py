import numpy as np

from walshlab.dyadic.models import Grid1, Grid2, Spectrum1, Spectrum2
from walshlab.dyadic.services.walsh import bit_reverse_permutation


def _hadamard(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Unnormalised natural-order Walsh-Hadamard butterfly; exact on integer dtypes."""
    data = np.moveaxis(np.asarray(values), axis, 0)
    size, rest = data.shape[0], data.shape[1:]
    result = data.copy()
    half = 1
    while half < size:
        blocks = result.reshape(size // (2 * half), 2, half, *rest)
        result = np.stack(
            (blocks[:, 0] + blocks[:, 1], blocks[:, 0] - blocks[:, 1]), axis=1
        ).reshape(size, *rest)
        half *= 2
    return np.moveaxis(result, 0, axis)


def _resolution_of(values: np.ndarray, axis: int) -> int:
    return values.shape[axis].bit_length() - 1


def analyze(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Walsh-Fourier coefficients along one axis of a raw array of cell averages."""
    values = np.asarray(values)
    resolution = _resolution_of(values, axis)
    reordered = np.take(values, bit_reverse_permutation(resolution), axis=axis)
    return _hadamard(reordered, axis) / float(1 << resolution)


def synthesize(coeffs: np.ndarray, axis: int = 0) -> np.ndarray:
    """Inverse of :func:`analyze`; integer coefficients give integer values."""
    coeffs = np.asarray(coeffs)
    resolution = _resolution_of(coeffs, axis)
    return np.take(_hadamard(coeffs, axis), bit_reverse_permutation(resolution), axis=axis)


def fwht_forward(g: Grid1) -> Spectrum1:
    return Spectrum1(g.resolution, analyze(g.values))


def fwht_inverse(spectrum: Spectrum1) -> Grid1:
    return Grid1(spectrum.resolution, synthesize(spectrum.values))


def fwht_forward_2d(f: Grid2) -> Spectrum2:
    return Spectrum2(f.resolution, analyze(analyze(f.values, axis=0), axis=1))


def fwht_inverse_2d(spectrum: Spectrum2) -> Grid2:
    return Grid2(spectrum.resolution, synthesize(synthesize(spectrum.values, axis=0), axis=1))
