"""
Place Sweeps

Runs a per-place computation over all places of bounded degree, either
inline or on a process pool. Results always come back in place order, so
reports do not depend on the worker count.
"""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Sequence, TypeVar

from drinfeld_lab.algebra.fields import Field
from drinfeld_lab.arithmetic.funcfield import Place, place_rng, places_up_to

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass
class PlaceSkip:
    """A place excluded from a sweep, with the reason."""

    place: List[Any]
    reason: str

    def to_dict(self) -> dict:
        return {"place": self.place, "reason": self.reason}


def run_sweep(func: Callable[[Any], T], tasks: Sequence[Any], workers: int = 1) -> List[T]:
    """map(func, tasks) in order; func and tasks must be picklable when workers > 1."""
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    chunksize = max(1, len(tasks) // (4 * workers))
    logger.debug(f"Sweeping {len(tasks)} places on {workers} workers")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=chunksize))


def sweep_places(
    fq: Field,
    bound: int,
    func: Callable[[Any], T],
    make_task: Callable[[Place, random.Random], Any],
    workers: int = 1,
    seed: int = 0,
) -> List[T]:
    """
    Apply func to make_task(v, rng) for every place v of degree ≤ bound, rng
    being the generator of v under `seed`.
    """
    places = places_up_to(fq, bound, seed)
    logger.info(f"Sweeping {len(places)} places of degree ≤ {bound}")
    return run_sweep(func, [make_task(v, place_rng(seed, v.pi)) for v in places], workers)
