import logging

import numpy as np

from walshlab.cli.exceptions import SpecGenerationError
from walshlab.cli.specs import (
    ConstSpec,
    FunctionSpec,
    RectSpec,
    SingularSpec,
    StepSpec,
    WalshSpec,
    parse_spec,
)
from walshlab.dyadic.models import Grid2, check_resolution
from walshlab.dyadic.services.averages import expand
from walshlab.dyadic.services.walsh import walsh_row

logger = logging.getLogger(__name__)


def _prefix_indicator(prefix: int, length: int, resolution: int) -> np.ndarray:
    if length > resolution:
        raise SpecGenerationError(f"Prefix length {length} exceeds resolution {resolution}.")
    codes = np.arange(1 << resolution)
    return (codes >> (resolution - length) == prefix).astype(np.float64)


def _midpoint_power(beta: float, resolution: int) -> np.ndarray:
    midpoints = (np.arange(1 << resolution) + 0.5) / (1 << resolution)
    return midpoints ** -beta


def generate(spec: FunctionSpec, resolution: int) -> Grid2:
    """Samples ``spec`` on level-``resolution`` cells."""
    check_resolution(resolution)
    size = 1 << resolution
    match spec:
        case ConstSpec(value=value):
            values = np.full((size, size), value)
        case WalshSpec(i=i, j=j):
            if max(i, j) >= size:
                raise SpecGenerationError(
                    f"Frequencies ({i}, {j}) do not exist at resolution {resolution}."
                )
            values = np.outer(walsh_row(i, resolution), walsh_row(j, resolution))
        case RectSpec():
            values = np.outer(
                _prefix_indicator(spec.x_prefix, spec.x_length, resolution),
                _prefix_indicator(spec.y_prefix, spec.y_length, resolution),
            )
        case StepSpec(level=level, seed=seed):
            if level > resolution:
                raise SpecGenerationError(f"Step level {level} exceeds resolution {resolution}.")
            cells = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(1 << level, 1 << level))
            values = expand(expand(cells, resolution, axis=0), resolution, axis=1)
        case SingularSpec(beta=beta):
            profile = _midpoint_power(beta, resolution)
            values = np.outer(profile, profile)
        case _:
            raise SpecGenerationError(f"Unsupported function spec {spec!r}.")
    return Grid2(resolution, values)


def generate_text(text: str, resolution: int) -> Grid2:
    return generate(parse_spec(text), resolution)


def default_corpus(resolution: int, seed: int = 0) -> dict[str, Grid2]:
    """
    The shared experiment corpus: constants, Walsh products, dyadic rectangles, random steps
    and the two singular products. Members that do not fit ``resolution`` are left out.
    """
    texts = [
        'const:1',
        'walsh:1,1',
        'walsh:3,5',
        'rect:0,1,0,1',
        'rect:1,2,2,2',
        f'step:2:{seed}',
        f'step:4:{seed}',
        f'step:4:{seed + 1}',
        'singular:0.25',
        'singular:0.4',
    ]
    corpus = {}
    for text in texts:
        try:
            corpus[text] = generate_text(text, resolution)
        except SpecGenerationError:
            logger.debug("Corpus member skipped", extra={'spec': text, 'resolution': resolution})
    return corpus
