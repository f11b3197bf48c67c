"""Greedy reduction of a candidate pool, plain and with random tie-breaking."""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InfeasibleCoverError, ValidationError

DEFAULT_RESTARTS = 1000


@dataclass
class GreedyRun:
    """Best selection found; ``sizes`` holds one cover size per restart."""

    selected: list[int]
    seed: int | None = None
    restarts: int = 1
    sizes: list[int] = field(default_factory=list)

    @property
    def best_size(self) -> int:
        return len(self.selected)

    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.sizes).items()))

    def to_dict(self) -> dict:
        return {
            "selected": self.selected,
            "best_size": self.best_size,
            "seed": self.seed,
            "restarts": self.restarts,
            "histogram": {str(k): v for k, v in self.histogram().items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _matrix_of(pool) -> tuple[np.ndarray, np.ndarray]:
    """Removal matrix and the point ids of its columns."""
    if hasattr(pool, "removal"):
        return np.asarray(pool.removal, dtype=bool), np.asarray(pool.transitions.impossible)
    if hasattr(pool, "matrix"):
        return np.asarray(pool.matrix, dtype=bool), np.asarray(pool.col_ids)
    mat = np.asarray(pool, dtype=bool)
    if mat.ndim != 2:
        raise ValidationError("expected a pool, a cover instance or a 2-D boolean matrix")
    return mat, np.arange(mat.shape[1])


def _check_covered(mat, cols):
    if mat.shape[1] == 0:
        return
    hole = np.flatnonzero(~mat.any(axis=0))
    if hole.size:
        raise InfeasibleCoverError(int(cols[hole[0]]))


def _run(mat: np.ndarray, rng=None) -> list[int]:
    left = np.ones(mat.shape[1], dtype=bool)
    work = mat.astype(np.int32)
    gains = work.sum(axis=1)
    picked: list[int] = []
    while left.any():
        best = gains.max()
        if rng is None:
            i = int(np.argmax(gains))
        else:
            ties = np.flatnonzero(gains == best)
            i = int(ties[rng.integers(len(ties))])
        picked.append(i)
        newly = left & mat[i]
        left &= ~newly
        gains -= work[:, newly].sum(axis=1)
    return picked


def greedy_reduce(pool) -> GreedyRun:
    """Pick the member removing the most remaining points until none remain.

    Ties go to the lowest member id.
    """
    mat, cols = _matrix_of(pool)
    _check_covered(mat, cols)
    picked = _run(mat)
    return GreedyRun(picked, None, 1, [len(picked)])


def greedy_random_tiebreaker(
    pool,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
    threads: int | None = 1,
) -> GreedyRun:
    """Best of ``restarts`` greedy runs with uniformly random tie-breaking.

    Restart ``r`` draws from its own stream seeded by ``(seed, r)``, so the
    result does not depend on ``threads``.  The earliest restart reaching
    the best size wins.
    """
    if restarts < 1:
        raise ValidationError("restarts must be at least 1")
    mat, cols = _matrix_of(pool)
    _check_covered(mat, cols)

    def one(r):
        return _run(mat, np.random.default_rng([seed, r]))

    if threads == 1:
        runs = [one(r) for r in range(restarts)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            runs = list(ex.map(one, range(restarts)))
    sizes = [len(run) for run in runs]
    best = runs[int(np.argmin(sizes))]
    return GreedyRun(best, seed, restarts, sizes)
