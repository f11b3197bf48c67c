"""Exact minimum set cover by branch and bound.

Rows are candidate inequalities, columns are impossible points, and
``matrix[i, j]`` is true when inequality ``i`` removes point ``j``.  The
solver minimizes the number of chosen rows such that every column is
covered.

Lower bounds come from two dual-feasible certificates: a greedy packing of
pairwise row-disjoint columns (each needs its own row) and the scaled dual
of the LP relaxation.  A child node inherits its parent's dual vector
restricted to the still-uncovered columns, which stays feasible, so a fresh
LP is solved only when the inherited bound fails to prune.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .exceptions import InfeasibleCoverError, ResourceLimitError

DEFAULT_TIME_LIMIT = 60.0
DEFAULT_NODE_LIMIT = 10_000_000
_EPS = 1e-6


@dataclass
class CoverInstance:
    """Boolean incidence matrix plus the ids its rows and columns stand for."""

    matrix: np.ndarray
    row_ids: np.ndarray
    col_ids: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=bool)
        self.row_ids = np.asarray(self.row_ids)
        self.col_ids = np.asarray(self.col_ids)
        if self.matrix.ndim != 2:
            raise ValueError("cover matrix must be 2-D")
        if self.matrix.shape != (len(self.row_ids), len(self.col_ids)):
            raise ValueError("row/column id arrays do not match the matrix shape")

    @property
    def shape(self):
        return self.matrix.shape

    @classmethod
    def from_sets(cls, subsets, universe=None):
        """Instance from an explicit set system (rows = subsets)."""
        subsets = [set(s) for s in subsets]
        if universe is None:
            universe = sorted(set().union(*subsets)) if subsets else []
        universe = list(universe)
        pos = {e: j for j, e in enumerate(universe)}
        mat = np.zeros((len(subsets), len(universe)), dtype=bool)
        for i, s in enumerate(subsets):
            for e in s:
                if e in pos:
                    mat[i, pos[e]] = True
        inst = cls(mat, np.arange(len(subsets)), np.asarray(universe))
        inst.check_feasible()
        return inst

    def check_feasible(self):
        covered = self.matrix.any(axis=0)
        if not covered.all():
            raise InfeasibleCoverError(int(self.col_ids[np.argmin(covered)]))

    def is_cover(self, rows) -> bool:
        rows = list(rows)
        if self.matrix.shape[1] == 0:
            return True
        if not rows:
            return False
        return bool(self.matrix[rows].any(axis=0).all())


@dataclass
class CoverSolution:
    chosen: list[int]
    size: int
    optimal: bool
    lower_bound: int
    upper_bound: int
    nodes: int = 0
    elapsed: float = 0.0
    reduced_shape: tuple = ()
    stats: dict = field(default_factory=dict)

    @property
    def bound_gap(self) -> tuple[int, int]:
        return self.lower_bound, self.upper_bound

    def to_dict(self) -> dict:
        return {
            "chosen": [int(r) for r in self.chosen],
            "size": self.size,
            "optimal": self.optimal,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "nodes": self.nodes,
            "elapsed": round(self.elapsed, 4),
            "reduced_shape": list(self.reduced_shape),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def build_instance(pool, impossible=None) -> CoverInstance:
    """Cover matrix of a candidate pool: rows are members, columns impossible points.

    Raises ``InfeasibleCoverError`` naming the first uncovered point.
    """
    mat = np.asarray(pool.removal, dtype=bool)
    cols = np.asarray(pool.transitions.impossible)
    if impossible is not None:
        wanted = np.asarray(sorted(int(p) for p in impossible), dtype=np.int64)
        pos = np.searchsorted(cols, wanted)
        pos = np.minimum(pos, max(len(cols) - 1, 0))
        known = cols[pos] == wanted if len(cols) else np.zeros(len(wanted), dtype=bool)
        if not known.all():
            raise InfeasibleCoverError(int(wanted[~known][0]))
        mat, cols = mat[:, pos], wanted
    inst = CoverInstance(mat, np.arange(mat.shape[0]), cols)
    inst.check_feasible()
    return inst


# -- reductions ---------------------------------------------------------------------

def _dedup_rows(mat: np.ndarray, rows: np.ndarray):
    """Drop duplicate rows, keeping the first occurrence."""
    if len(rows) == 0:
        return rows
    packed = np.packbits(mat[rows], axis=1)
    _, first = np.unique(packed, axis=0, return_index=True)
    return rows[np.sort(first)]


def _undominated(mat: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Mask of rows of ``mat`` not contained in another row.

    Rows are assumed distinct.  Among rows with identical sets only the
    first would survive, but distinctness makes that moot.
    """
    m = len(mat)
    if m == 0:
        return np.zeros(0, dtype=bool)
    sizes = mat.sum(axis=1)
    order = np.argsort(-sizes, kind="stable")
    dense = mat[order].astype(np.float32)
    ssorted = sizes[order]
    keep = np.zeros(m, dtype=bool)
    kept = np.zeros((0, mat.shape[1]), dtype=np.float32)
    for s in range(0, m, chunk):
        block = dense[s:s + chunk]
        need = ssorted[s:s + chunk, None] - 0.5
        dom = np.zeros(len(block), dtype=bool)
        if len(kept):
            dom |= ((block @ kept.T) >= need).any(axis=1)
        inner = (block @ block.T) >= need
        # in descending size order a strict superset always comes first
        dom |= np.tril(inner, -1).any(axis=1)
        keep[s:s + len(block)] = ~dom
        kept = np.vstack([kept, block[~dom]])
    out = np.zeros(m, dtype=bool)
    out[order] = keep
    # rows of size zero never help
    out &= sizes > 0
    return out


def _column_undominated(mat: np.ndarray) -> np.ndarray:
    """Mask of columns to keep: drop ``j`` when some ``j'`` has rows(j') ⊆ rows(j)."""
    c = mat.shape[1]
    if c == 0:
        return np.zeros(0, dtype=bool)
    dense = mat.T.astype(np.float32)
    sizes = mat.sum(axis=0)
    inter = dense @ dense.T
    # sub[j, j'] : rows(j') ⊆ rows(j)
    sub = inter >= sizes[None, :] - 0.5
    np.fill_diagonal(sub, False)
    equal = sub & sub.T
    strict = sub & ~equal
    drop = strict.any(axis=1)
    # identical columns: keep the lowest index
    drop |= np.tril(equal, -1).any(axis=1)
    return ~drop


def reduce_instance(inst: CoverInstance, max_rounds: int = 10):
    """Apply duplicate/dominated row and dominated column removal to a fixpoint.

    Returns ``(reduced_matrix, row_index, col_index)`` where the index arrays
    select rows/columns of the original matrix.
    """
    mat = inst.matrix
    rows = _dedup_rows(mat, np.arange(mat.shape[0]))
    cols = np.arange(mat.shape[1])
    for _ in range(max_rounds):
        sub = mat[np.ix_(rows, cols)]
        rmask = _undominated(sub)
        sub = sub[rmask]
        cmask = _column_undominated(sub) if sub.shape[1] <= 8192 else np.ones(sub.shape[1], bool)
        changed = (not rmask.all()) or (not cmask.all())
        rows, cols = rows[rmask], cols[cmask]
        if not changed:
            break
        rows = rows[_dedup_rows(mat[np.ix_(rows, cols)], np.arange(len(rows)))]
    return mat[np.ix_(rows, cols)], rows, cols


# -- bounds -------------------------------------------------------------------------

def disjoint_columns_bound(mat: np.ndarray) -> int:
    """Size of a greedy packing of columns with pairwise disjoint row sets."""
    if mat.shape[1] == 0:
        return 0
    counts = mat.sum(axis=0)
    used = np.zeros(mat.shape[0], dtype=bool)
    picked = 0
    for j in np.argsort(counts, kind="stable"):
        col = mat[:, j]
        if not (col & used).any():
            used |= col
            picked += 1
    return picked


def _lp_solve(mat: np.ndarray):
    """LP relaxation: primal ``x`` and a dual-feasible ``y`` (``mat @ y <= 1``)."""
    m, c = mat.shape
    res = linprog(
        np.ones(m),
        A_ub=-mat.T.astype(float),
        b_ub=-np.ones(c),
        bounds=(0, None),
        method="highs",
    )
    if res.status != 0:
        return None
    y = np.maximum(-res.ineqlin.marginals, 0.0)
    load = mat.astype(float) @ y
    peak = load.max() if len(load) else 0.0
    if peak > 1.0:
        y = y / peak
    return res.x, y


def _lp_dual(mat: np.ndarray):
    lp = _lp_solve(mat)
    return None if lp is None else lp[1]


def _bound_from_dual(y_sum: float) -> int:
    return math.ceil(y_sum - _EPS)


# -- heuristics ---------------------------------------------------------------------

def greedy_cover(mat: np.ndarray) -> list[int]:
    """Plain greedy; ties go to the lowest row index."""
    uncovered = np.ones(mat.shape[1], dtype=bool)
    chosen = []
    gains = mat.sum(axis=1).astype(np.int64)
    dense = mat.astype(np.int64)
    while uncovered.any():
        best = int(np.argmax(gains))
        if gains[best] == 0:
            raise InfeasibleCoverError(int(np.flatnonzero(uncovered)[0]))
        chosen.append(best)
        newly = mat[best] & uncovered
        uncovered &= ~newly
        gains -= dense[:, newly].sum(axis=1)
    return chosen


def _prune_redundant(mat: np.ndarray, chosen: list[int]) -> list[int]:
    chosen = list(chosen)
    for r in sorted(chosen, key=lambda r: mat[r].sum()):
        rest = [x for x in chosen if x != r]
        if rest and mat[rest].any(axis=0).all():
            chosen = rest
    return chosen


def _randomized_greedy(mat: np.ndarray, rng, rounds: int) -> list[int]:
    best = None
    dense = mat.astype(np.int64)
    for _ in range(rounds):
        uncovered = np.ones(mat.shape[1], dtype=bool)
        gains = dense.sum(axis=1)
        chosen = []
        while uncovered.any():
            top = gains.max()
            ties = np.flatnonzero(gains == top)
            pick = int(ties[rng.integers(len(ties))])
            chosen.append(pick)
            newly = mat[pick] & uncovered
            uncovered &= ~newly
            gains -= dense[:, newly].sum(axis=1)
        chosen = _prune_redundant(mat, chosen)
        if best is None or len(chosen) < len(best):
            best = chosen
    return best


def _lp_dive(mat: np.ndarray) -> list[int]:
    """Fix the row with the largest LP value to 1 and resolve until covered."""
    uncovered = np.ones(mat.shape[1], dtype=bool)
    rows = np.arange(mat.shape[0])
    chosen = []
    while uncovered.any():
        sub = mat[np.ix_(rows, uncovered)]
        lp = _lp_solve(sub)
        if lp is None:
            return greedy_cover(mat)
        x = lp[0]
        r = int(rows[int(np.argmax(x))])
        chosen.append(r)
        uncovered &= ~mat[r]
    return _prune_redundant(mat, chosen)


# -- branch and bound ---------------------------------------------------------------

class _Search:
    def __init__(self, mat, incumbent, time_limit, node_limit, use_lp):
        self.mat = mat
        self.dense = mat.astype(np.float64)
        self.best = list(incumbent)
        self.time_limit = time_limit
        self.node_limit = node_limit
        self.use_lp = use_lp
        self.nodes = 0
        self.lp_solves = 0
        self.start = time.perf_counter()
        self.aborted = False

    def _out_of_budget(self) -> bool:
        if self.nodes >= self.node_limit:
            return True
        if self.nodes % 64 == 0 and time.perf_counter() - self.start > self.time_limit:
            return True
        return False

    def run(self, y_root):
        m, c = self.mat.shape
        self._visit(np.ones(m, dtype=bool), np.ones(c, dtype=bool), [], y_root)

    def _visit(self, active, uncovered, chosen, y_parent):
        if self.aborted:
            return
        self.nodes += 1
        if self._out_of_budget():
            self.aborted = True
            return
        if not uncovered.any():
            if len(chosen) < len(self.best):
                self.best = list(chosen)
            return
        # rows that may still be added for a strict improvement
        allowed = len(self.best) - 1 - len(chosen)
        if allowed <= 0:
            return
        rows = np.flatnonzero(active)
        sub = self.mat[np.ix_(rows, uncovered)]
        gain = sub.sum(axis=1)
        if allowed == 1:
            full = rows[gain == uncovered.sum()]
            if full.size:
                self.best = chosen + [int(full[0])]
            return
        live = gain > 0
        rows, sub = rows[live], sub[live]
        if (sub.sum(axis=0) == 0).any():
            return
        y = None
        if y_parent is not None:
            y = y_parent[uncovered]
            keep = self._reduced_cost_keep(sub, y, allowed)
            if keep is None:
                return
            rows, sub = rows[keep], sub[keep]
        if disjoint_columns_bound(sub) > allowed:
            return
        if math.ceil(uncovered.sum() / sub.sum(axis=1).max()) > allowed:
            return
        x = None
        if self.use_lp:
            lp = _lp_solve(sub)
            self.lp_solves += 1
            if lp is not None:
                x, y = lp
                keep = self._reduced_cost_keep(sub, y, allowed)
                if keep is None:
                    return
                rows, sub, x = rows[keep], sub[keep], x[keep]
        y_full = None
        if y is not None:
            y_full = np.zeros(self.mat.shape[1])
            y_full[uncovered] = y
        # branch on the column with fewest covering rows
        counts = sub.sum(axis=0)
        jc = int(np.argmin(counts))
        pick = np.flatnonzero(sub[:, jc])
        if x is not None:
            order = np.lexsort((-sub[pick].sum(axis=1), -x[pick]))
        else:
            order = np.argsort(-sub[pick].sum(axis=1), kind="stable")
        cand = rows[pick[order]]
        child_active = np.zeros_like(active)
        child_active[rows] = True
        for r in cand:
            child_uncovered = uncovered & ~self.mat[r]
            self._visit(child_active.copy(), child_uncovered, chosen + [int(r)], y_full)
            if self.aborted:
                return
            child_active[r] = False
            if len(self.best) - 1 - len(chosen) <= 0:
                return

    @staticmethod
    def _reduced_cost_keep(sub, y, allowed):
        """Rows that may still appear in an improving cover, or None to prune.

        With dual-feasible ``y``, any cover using row ``r`` costs at least
        ``sum(y) + (1 - sub[r] @ y)``.
        """
        lb = y.sum()
        if _bound_from_dual(lb) > allowed:
            return None
        rc = 1.0 - sub.astype(np.float64) @ y
        keep = np.ceil(lb + rc - _EPS) <= allowed
        if not keep.any() or (sub[keep].sum(axis=0) == 0).any():
            return None
        return keep


def solve_exact(
    inst: CoverInstance,
    *,
    time_limit: float = DEFAULT_TIME_LIMIT,
    node_limit: int = DEFAULT_NODE_LIMIT,
    reductions: bool = True,
    lp_bound: bool = True,
    seed: int = 0,
) -> CoverSolution:
    """Minimum cover of every column of ``inst``.

    Stops at the time/node budget with ``optimal=False`` and the certified
    ``lower_bound``/``upper_bound`` pair.
    """
    start = time.perf_counter()
    inst.check_feasible()
    m, c = inst.shape
    if c == 0:
        return CoverSolution([], 0, True, 0, 0, elapsed=time.perf_counter() - start)
    if reductions:
        mat, rows, _cols = reduce_instance(inst)
    else:
        mat, rows = inst.matrix, np.arange(m)

    incumbent = _prune_redundant(mat, greedy_cover(mat))
    rng = np.random.default_rng(seed)
    alt = _randomized_greedy(mat, rng, rounds=30)
    if len(alt) < len(incumbent):
        incumbent = alt
    if lp_bound:
        alt = _lp_dive(mat)
        if len(alt) < len(incumbent):
            incumbent = alt

    y_root = _lp_dual(mat) if lp_bound else None
    lower = disjoint_columns_bound(mat)
    if y_root is not None:
        lower = max(lower, _bound_from_dual(y_root.sum()))

    search = _Search(mat, incumbent, time_limit - (time.perf_counter() - start), node_limit, lp_bound)
    if lower < len(incumbent):
        search.run(y_root)
    best = search.best
    optimal = not search.aborted
    if optimal:
        lower = len(best)
    chosen = sorted(int(rows[r]) for r in best)
    return CoverSolution(
        chosen=chosen,
        size=len(chosen),
        optimal=optimal,
        lower_bound=lower,
        upper_bound=len(chosen),
        nodes=search.nodes,
        elapsed=time.perf_counter() - start,
        reduced_shape=mat.shape,
        stats={"lp_solves": search.lp_solves},
    )


def solve_or_raise(inst: CoverInstance, **kwargs) -> CoverSolution:
    sol = solve_exact(inst, **kwargs)
    if not sol.optimal:
        raise ResourceLimitError(
            f"set cover budget exhausted: best {sol.upper_bound}, lower bound {sol.lower_bound}"
        )
    return sol


# -- LP export ----------------------------------------------------------------------

def to_lp(inst: CoverInstance) -> str:
    """CPLEX-LP text of the cover model with binaries ``c0 .. c{m-1}``."""
    m, c = inst.shape
    lines = ["\\ minimum inequality subset covering every impossible point", "Minimize"]
    obj = " + ".join(f"c{i}" for i in range(m)) or "0"
    lines.append(f" obj: {obj}")
    lines.append("Subject To")
    for j in range(c):
        rows = np.flatnonzero(inst.matrix[:, j])
        expr = " + ".join(f"c{i}" for i in rows)
        lines.append(f" p{int(inst.col_ids[j])}: {expr} >= 1")
    lines.append("Binary")
    for s in range(0, m, 10):
        lines.append(" " + " ".join(f"c{i}" for i in range(s, min(m, s + 10))))
    lines.append("End")
    return "\n".join(lines) + "\n"
