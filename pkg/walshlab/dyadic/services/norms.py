import numpy as np

from walshlab.dyadic.exceptions import OutOfRangeError
from walshlab.dyadic.models import Grid


def norm_p(f: Grid, p: float) -> float:
    """Haar-weighted ``(∫ |f|^p dμ)^{1/p}``."""
    if not p > 0:
        raise OutOfRangeError(f"Exponent p must be positive, got {p}.")
    magnitudes = np.abs(f.values)
    if p == 1:
        return float(magnitudes.mean())
    return float(np.mean(magnitudes ** p) ** (1.0 / p))


def norm_sup(f: Grid) -> float:
    return float(np.abs(f.values).max())


def log_plus(values: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(values, 1.0))


def llogl_functional(f: Grid) -> float:
    """``∫ |f| log⁺|f| dμ``."""
    magnitudes = np.abs(f.values)
    return float(np.mean(magnitudes * log_plus(magnitudes)))
