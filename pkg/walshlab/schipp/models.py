from dataclasses import dataclass

import numpy as np

from walshlab.dyadic.models import Grid1


@dataclass(frozen=True, eq=False, slots=True)
class VProfile:
    """``V_n f`` for ``n = 0..resolution`` together with their running supremum ``Vf``."""
    resolution: int
    levels: tuple[np.ndarray, ...]

    def level(self, n: int) -> Grid1:
        return Grid1(self.resolution, self.levels[n])

    @property
    def sup(self) -> Grid1:
        return Grid1(self.resolution, np.maximum.reduce(self.levels))

    def argmax_level(self) -> np.ndarray:
        """Smallest level attaining the supremum at each point."""
        return np.argmax(np.stack(self.levels), axis=0)
