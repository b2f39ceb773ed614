from pathlib import Path

import numpy as np

from walshlab.config import settings
from walshlab.dyadic.exceptions import GridFormatError
from walshlab.dyadic.models import Grid1, Grid2, Spectrum1, Spectrum2, _Lattice

HEADER_KEY = 'resolution'


def dump_lattice(item: _Lattice, path: Path | str) -> Path:
    """Writes ``resolution,N`` followed by one value per line in code order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(
        path,
        item.values.ravel(),
        fmt=settings.FLOAT_FORMAT,
        header=f"{HEADER_KEY},{item.resolution}",
        comments='',
    )
    return path


def _read(path: Path | str) -> tuple[int, np.ndarray]:
    path = Path(path)
    try:
        with path.open(encoding='utf-8') as stream:
            key, _, raw_resolution = stream.readline().strip().partition(',')
            if key != HEADER_KEY:
                raise GridFormatError(f"{path}: expected header '{HEADER_KEY},N'.")
            resolution = int(raw_resolution)
            values = np.loadtxt(stream, dtype=np.float64, ndmin=1)
    except ValueError as error:
        if isinstance(error, GridFormatError):
            raise
        raise GridFormatError(f"{path}: {error}") from error
    return resolution, values


def _dimension(resolution: int, values: np.ndarray, ndim: int | None) -> int:
    if ndim is not None:
        return ndim
    return 2 if resolution > 0 and values.size == 1 << (2 * resolution) else 1


def load_grid(path: Path | str, ndim: int | None = None) -> Grid1 | Grid2:
    """Loads a grid; the dimension is taken from the value count unless given."""
    resolution, values = _read(path)
    kind = Grid2 if _dimension(resolution, values, ndim) == 2 else Grid1
    return kind(resolution, values)


def load_spectrum(path: Path | str, ndim: int | None = None) -> Spectrum1 | Spectrum2:
    resolution, values = _read(path)
    kind = Spectrum2 if _dimension(resolution, values, ndim) == 2 else Spectrum1
    return kind(resolution, values)


dump_grid = dump_lattice
dump_spectrum = dump_lattice
