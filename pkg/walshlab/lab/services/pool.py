from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from walshlab.config import settings

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(function: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Evaluates independent items on ``settings.THREADS`` workers, results in input order."""
    items = list(items)
    if settings.THREADS == 1 or len(items) < 2:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=settings.THREADS) as executor:
        return list(executor.map(function, items))
