"""Candidate inequality pools for the cover step.

Every pool is a deduplicated set of normalized inequalities, each annotated
with the impossible points it removes.  Builders:

* ``hull_pool``             the raw H-representation
* ``subset_addition_pool``  raw hull plus good sums of k facets sharing a
                            possible point
* ``random_sum_pool``       raw hull plus randomly drawn incident k-sums whose
                            removal set is not contained in any summand's
* ``conditional_pool``      one single-point cut per impossible point
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InfeasibleCoverError, ResourceLimitError
from .hull import HRep
from .inequality import Inequality, RemovalSet, homogenize, single_point_cut
from .sbox import Transitions, all_points, index_to_bits
from .setcover import CoverInstance, build_instance

HULL, SUBSET_SUM, RANDOM_SUM, CONDITIONAL = "hull-facet", "subset-sum", "random-sum", "conditional-cut"
KINDS = (HULL, SUBSET_SUM, RANDOM_SUM, CONDITIONAL)

TYPE1, TYPE2, REJECTED = "type1", "type2", "rejected"

DEFAULT_MAX_INCIDENT = 512
DEFAULT_MAX_SUMS = 10_000_000
_CHUNK = 65536


@dataclass(frozen=True)
class GoodnessVerdict:
    kind: str
    new_count: int
    min_count: int
    max_count: int


def classify_counts(new_count: int, counts) -> GoodnessVerdict:
    lo, hi = min(counts), max(counts)
    if new_count >= hi:
        kind = TYPE2
    elif new_count > lo:
        kind = TYPE1
    else:
        kind = REJECTED
    return GoodnessVerdict(kind, int(new_count), int(lo), int(hi))


def classify_sum(constituents, sum_removal) -> GoodnessVerdict:
    """Verdict for a sum given its summands' removal sets and its own."""
    if len(constituents) < 2:
        raise ValueError("a sum needs at least two constituents")
    counts = [len(c.removed) if isinstance(c, RemovalSet) else len(c) for c in constituents]
    return classify_counts(len(sum_removal), counts)


def _normalize_rows(rows: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(np.abs(rows), axis=1)
    g[g == 0] = 1
    return rows // g[:, None]


def _removal_matrix(rows: np.ndarray, imp_h: np.ndarray) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, len(imp_h)), dtype=bool)
    # small integers: float BLAS is exact here and much faster than int matmul
    return (rows.astype(np.float64) @ imp_h.T.astype(np.float64)) < -0.5


@dataclass
class CandidatePool:
    """Pool members as parallel arrays.

    ``rows[i]`` is ``(a_0, ..., a_{d-1}, b)`` of member ``i``;
    ``removal[i, j]`` is true when it removes ``transitions.impossible[j]``.
    """

    transitions: Transitions
    rows: np.ndarray
    removal: np.ndarray
    kinds: np.ndarray
    sources: np.ndarray
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self) -> int:
        return self.transitions.dim

    def inequality(self, i) -> Inequality:
        return Inequality.from_row(self.rows[i])

    def inequalities(self, ids=None) -> list[Inequality]:
        ids = range(len(self)) if ids is None else ids
        return [self.inequality(i) for i in ids]

    def removal_set(self, i) -> RemovalSet:
        removed = frozenset(int(p) for p in self.transitions.impossible[self.removal[i]])
        return RemovalSet(self.inequality(i), removed)

    def members(self) -> list[RemovalSet]:
        return [self.removal_set(i) for i in range(len(self))]

    def counts_by_kind(self) -> dict:
        names, counts = np.unique(self.kinds, return_counts=True)
        return {str(k): int(c) for k, c in zip(names, counts)}

    def covers_all(self) -> bool:
        return bool(self.removal.any(axis=0).all()) if self.removal.shape[1] else True

    def uncovered(self) -> np.ndarray:
        return self.transitions.impossible[~self.removal.any(axis=0)]

    def check_sound(self):
        """Assert that no member violates a possible point."""
        pos_h = homogenize(self.transitions.possible_points()).astype(np.float64)
        bad = (self.rows.astype(np.float64) @ pos_h.T) < -0.5
        if bad.any():
            i, p = np.argwhere(bad)[0]
            raise AssertionError(
                f"pool member {self.inequality(i)} violates possible point "
                f"{int(self.transitions.possible[p])}"
            )

    def instance(self) -> CoverInstance:
        """The cover matrix; raises if some impossible point is uncovered."""
        return build_instance(self)

    def union(self, other: "CandidatePool") -> "CandidatePool":
        """Set union; members already in ``self`` keep their provenance."""
        if other.transitions is not self.transitions and not np.array_equal(
            other.transitions.possible, self.transitions.possible
        ):
            raise ValueError("pools belong to different SBoxes")
        rows = np.vstack([self.rows, other.rows])
        _, first = np.unique(rows, axis=0, return_index=True)
        keep = np.sort(first)
        stats = {"builders": self.stats.get("builders", []) + other.stats.get("builders", [])}
        return CandidatePool(
            self.transitions,
            rows[keep],
            np.vstack([self.removal, other.removal])[keep],
            np.concatenate([self.kinds, other.kinds])[keep],
            np.concatenate([self.sources, other.sources])[keep],
            stats,
        )

    __or__ = union

    def to_dict(self) -> dict:
        counts = self.removal.sum(axis=1)
        members = []
        for i in range(len(self)):
            entry = {
                "coeffs": [int(v) for v in self.rows[i, :-1]],
                "constant": int(self.rows[i, -1]),
                "provenance": str(self.kinds[i]),
                "removes": int(counts[i]),
            }
            if self.sources[i] >= 0:
                entry["point"] = int(self.sources[i])
            members.append(entry)
        return {
            "n": self.transitions.n,
            "size": len(self),
            "by_kind": self.counts_by_kind(),
            "stats": self.stats,
            "members": members,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _make_pool(transitions, rows, kinds, sources, stats=None) -> CandidatePool:
    """Dedup (first occurrence wins), compute removal sets, drop empty members."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, transitions.dim + 1)
    kinds = np.asarray(kinds, dtype=object)
    sources = np.asarray(sources, dtype=np.int64)
    if len(rows):
        _, first = np.unique(rows, axis=0, return_index=True)
        keep = np.sort(first)
        rows, kinds, sources = rows[keep], kinds[keep], sources[keep]
    imp_h = homogenize(transitions.impossible_points())
    removal = _removal_matrix(rows, imp_h)
    useful = removal.any(axis=1) if removal.shape[1] else np.zeros(len(rows), dtype=bool)
    return CandidatePool(
        transitions, rows[useful], removal[useful], kinds[useful], sources[useful], dict(stats or {})
    )


# -- builders ---------------------------------------------------------------------------

def hull_pool(hrep: HRep, transitions: Transitions) -> CandidatePool:
    rows = hrep.matrix()
    pool = _make_pool(
        transitions, rows, [HULL] * len(rows), [-1] * len(rows), {"builders": ["hull"]}
    )
    if not pool.covers_all():
        raise InfeasibleCoverError(int(pool.uncovered()[0]))
    return pool


def hyperplanes_through(point, hrep: HRep) -> list[Inequality]:
    """Rows of ``hrep`` (facets, plus equation halves) tight at ``point``."""
    bits = index_to_bits(point, hrep.n) if isinstance(point, (int, np.integer)) else tuple(point)
    ineqs = hrep.as_inequalities()
    mat = hrep.matrix()
    if len(mat) == 0:
        return []
    values = mat[:, :-1] @ np.asarray(bits, dtype=np.int64) + mat[:, -1]
    return [ineqs[i] for i in np.flatnonzero(values == 0)]


def _combinations(idx: np.ndarray, k: int) -> np.ndarray:
    m = len(idx)
    if m < k:
        return np.zeros((0, k), dtype=np.int64)
    if k == 2:
        a, b = np.triu_indices(m, 1)
        return np.stack([idx[a], idx[b]], axis=1)
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(m), k)),
                       dtype=np.int64, count=math.comb(m, k) * k)
    return idx[flat.reshape(-1, k)]


def _point_sums(facets, imp_values, counts, incident, k, admit_type1):
    """Good k-sums of the facets incident to one point (normalized rows)."""
    combos = _combinations(incident, k)
    kept_rows, n1, n2 = [], 0, 0
    for s in range(0, len(combos), _CHUNK):
        block = combos[s:s + _CHUNK]
        values = imp_values[block[:, 0]].copy()
        for t in range(1, k):
            values += imp_values[block[:, t]]
        new = (values < 0).sum(axis=1)
        parts = counts[block]
        type2 = new >= parts.max(axis=1)
        type1 = (new > parts.min(axis=1)) & ~type2
        good = type2 | type1 if admit_type1 else type2
        good &= new > 0
        if not good.any():
            continue
        n1 += int((type1 & good).sum())
        n2 += int((type2 & good).sum())
        sel = block[good]
        rows = facets[sel[:, 0]].copy()
        for t in range(1, k):
            rows += facets[sel[:, t]]
        kept_rows.append(rows)
    if kept_rows:
        rows = np.vstack(kept_rows)
        rows = rows[np.any(rows[:, :-1] != 0, axis=1)]
        rows = _normalize_rows(rows)
    else:
        rows = np.zeros((0, facets.shape[1]), dtype=np.int64)
    return rows, n1, n2


def subset_addition_pool(
    transitions: Transitions,
    hrep: HRep,
    k: int = 2,
    filter: str = TYPE1,
    *,
    exclude_origin: bool = True,
    threads: int | None = None,
    max_incident: int = DEFAULT_MAX_INCIDENT,
    max_sums: int = DEFAULT_MAX_SUMS,
) -> CandidatePool:
    """Raw hull plus every good sum of ``k`` hyperplanes sharing a possible point.

    ``filter='type1'`` admits type-1 and type-2 sums, ``'type2'`` only type 2.
    The result is identical for any ``threads`` value.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if filter not in (TYPE1, TYPE2):
        raise ValueError(f"filter must be {TYPE1!r} or {TYPE2!r}")
    facets = hrep.matrix()
    pos_h = homogenize(transitions.possible_points())
    imp_h = homogenize(transitions.impossible_points())
    tight = (facets @ pos_h.T) == 0
    imp_values = (facets @ imp_h.T).astype(np.int32)
    counts = (imp_values < 0).sum(axis=1)

    jobs = []
    total = 0
    for col, point in enumerate(transitions.possible):
        if exclude_origin and point == 0:
            continue
        incident = np.flatnonzero(tight[:, col])
        if len(incident) > max_incident:
            raise ResourceLimitError(
                f"point {int(point)} lies on {len(incident)} hyperplanes (limit {max_incident})"
            )
        total += math.comb(len(incident), k)
        if total > max_sums:
            raise ResourceLimitError(
                f"more than {max_sums} candidate sums at point {int(point)}; raise max_sums"
            )
        if len(incident) >= k:
            jobs.append((int(point), incident))

    def work(job):
        return _point_sums(facets, imp_values, counts, job[1], k, filter == TYPE1)

    if threads == 1 or len(jobs) <= 1:
        results = [work(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, jobs))

    batches = [(r, np.full(len(r), p, dtype=np.int64)) for (p, _), (r, _, _) in zip(jobs, results)]
    sums = np.vstack([b[0] for b in batches]) if batches else np.zeros((0, facets.shape[1]), np.int64)
    points = np.concatenate([b[1] for b in batches]) if batches else np.zeros(0, np.int64)
    # canonical order: by coefficient tuple, then generating point
    order = np.lexsort((points,) + tuple(sums[:, c] for c in range(sums.shape[1] - 1, -1, -1)))
    sums, points = sums[order], points[order]

    stats = {
        "builders": [f"subset-addition(k={k},{filter})"],
        "candidate_sums": total,
        "type1": sum(r[1] for r in results),
        "type2": sum(r[2] for r in results),
        "exclude_origin": exclude_origin,
    }
    rows = np.vstack([facets, sums])
    kinds = [HULL] * len(facets) + [SUBSET_SUM] * len(sums)
    sources = np.concatenate([np.full(len(facets), -1), points])
    pool = _make_pool(transitions, rows, kinds, sources, stats)
    pool.stats["size"] = len(pool)
    if not pool.covers_all():
        raise InfeasibleCoverError(int(pool.uncovered()[0]))
    pool.check_sound()
    return pool


def random_sum_pool(
    transitions: Transitions,
    hrep: HRep,
    k: int = 2,
    trials: int = 1000,
    seed: int = 0,
) -> CandidatePool:
    """Raw hull plus random incident k-sums whose removal set is new.

    A sum is kept when no single summand removes a superset of what the sum
    removes.
    """
    facets = hrep.matrix()
    pos_h = homogenize(transitions.possible_points())
    imp_h = homogenize(transitions.impossible_points())
    tight = (facets @ pos_h.T) == 0
    removes = (facets @ imp_h.T) < 0
    rng = np.random.default_rng(seed)
    eligible = [c for c in range(len(transitions.possible)) if tight[:, c].sum() >= k]
    kept, sources = [], []
    for _ in range(trials):
        if not eligible:
            break
        col = eligible[int(rng.integers(len(eligible)))]
        incident = np.flatnonzero(tight[:, col])
        pick = np.sort(rng.choice(incident, size=k, replace=False))
        row = facets[pick].sum(axis=0)
        if not row[:-1].any():
            continue
        new = (row @ imp_h.T) < 0
        # a sum can only cut points some summand already cuts, so "new" means
        # a removal set not contained in any single summand's
        if (new & ~removes[pick]).any(axis=1).all():
            kept.append(row)
            sources.append(int(transitions.possible[col]))
    sums = _normalize_rows(np.asarray(kept, dtype=np.int64).reshape(-1, facets.shape[1]))
    rows = np.vstack([facets, sums])
    kinds = [HULL] * len(facets) + [RANDOM_SUM] * len(sums)
    src = np.concatenate([np.full(len(facets), -1), np.asarray(sources, dtype=np.int64)])
    stats = {"builders": [f"random-sum(k={k},trials={trials},seed={seed})"], "kept_sums": len(sums)}
    pool = _make_pool(transitions, rows, kinds, src, stats)
    pool.check_sound()
    return pool


def conditional_pool(transitions: Transitions) -> CandidatePool:
    """One single-point cut per impossible point."""
    cube = all_points(transitions.n)
    rows = [single_point_cut(cube[p]).row() for p in transitions.impossible]
    return _make_pool(
        transitions,
        rows,
        [CONDITIONAL] * len(rows),
        transitions.impossible.tolist(),
        {"builders": ["conditional"]},
    )
