"""Exact H-representation of the convex hull of a set of 0/1 points.

The facets of ``conv(P)`` are the extreme rays of the dual cone
``{(a, b) : a . p + b >= 0 for all p in P}``.  That cone is built with the
double-description method: start from a simplicial cone spanned by an
affinely independent subset of ``P`` and add the remaining points as
constraints one at a time, in ascending index order.  All arithmetic is on
Python/numpy integers; rays are kept gcd-reduced.

Adjacency of a positive and a negative ray uses the combinatorial test: the
pair is adjacent iff no third ray is tight on every constraint the pair is
jointly tight on.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .exceptions import CompletenessError, DimensionError, ResourceLimitError, ValidationError
from .inequality import Inequality, as_matrix, evaluate_matrix, parse_text, to_text
from .sbox import Transitions, all_points

logger = logging.getLogger(__name__)

MAX_DIM = 12
DEFAULT_FACET_BUDGET = 50_000
_INT_LIMIT = 1 << 62


@dataclass
class HRep:
    """Facets and (for lower-dimensional hulls) affine equations."""

    dim: int
    inequalities: list[Inequality]
    equations: list[Inequality] = field(default_factory=list)

    def __len__(self):
        return len(self.inequalities)

    @property
    def n(self) -> int:
        return self.dim // 2

    def as_inequalities(self) -> list[Inequality]:
        """Facets followed by each equation as two opposing inequalities."""
        out = list(self.inequalities)
        for eq in self.equations:
            out.append(eq)
            out.append(Inequality(tuple(-c for c in eq.coeffs), -eq.constant))
        return out

    def matrix(self) -> np.ndarray:
        return as_matrix(self.as_inequalities())

    def normalized_set(self) -> frozenset:
        return frozenset(self.inequalities)


# -- exact linear algebra helpers --------------------------------------------

def _rank_select(rows: np.ndarray) -> list[int]:
    """Greedy selection of linearly independent rows (exact, over Q)."""
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    chosen = []
    for i, row in enumerate(rows):
        vec = [Fraction(int(v)) for v in row]
        for b, p in zip(basis, pivots):
            if vec[p]:
                f = vec[p] / b[p]
                vec = [x - f * y for x, y in zip(vec, b)]
        piv = next((j for j, x in enumerate(vec) if x), None)
        if piv is not None:
            basis.append(vec)
            pivots.append(piv)
            chosen.append(i)
    return chosen


def _integer_inverse_columns(mat: np.ndarray) -> list[list[int]]:
    """Columns of ``mat^{-1}`` scaled to primitive integer vectors."""
    d = mat.shape[0]
    aug = [[Fraction(int(mat[i, j])) for j in range(d)] + [Fraction(int(i == j)) for j in range(d)]
           for i in range(d)]
    for col in range(d):
        piv = next(r for r in range(col, d) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [row[d:] for row in aug]
    cols = []
    for j in range(d):
        col = [inv[i][j] for i in range(d)]
        lcm = math.lcm(*(x.denominator for x in col))
        ints = [int(x * lcm) for x in col]
        g = math.gcd(*ints)
        cols.append([v // g for v in ints])
    return cols


def _nullspace_int(mat: np.ndarray) -> list[list[int]]:
    """Integer basis of the right null space of ``mat`` (exact)."""
    rows, cols = mat.shape
    m = [[Fraction(int(v)) for v in row] for row in mat]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        lcm = math.lcm(*(x.denominator for x in vec))
        ints = [int(x * lcm) for x in vec]
        g = math.gcd(*ints)
        basis.append([v // g for v in ints])
    return basis


# -- double description --------------------------------------------------------

def _double_description(gens: np.ndarray, facet_budget: int) -> np.ndarray:
    """Extreme rays of ``{a : gens @ a >= 0}`` for a full-rank pointed cone.

    ``gens`` is ``m x d`` with rank ``d``.  Returns a ``k x d`` integer matrix.
    """
    m, d = gens.shape
    init = _rank_select(gens)
    if len(init) != d:
        raise ValidationError("generator matrix is not full rank")
    rays = np.asarray(_integer_inverse_columns(gens[init]), dtype=np.int64)
    # ray i is tight on every initial constraint except the i-th
    full = (1 << d) - 1
    zeros = [full ^ (1 << i) for i in range(d)]
    order = list(init) + [i for i in range(m) if i not in set(init)]
    for step in range(d, m):
        row = gens[order[step]]
        values = rays @ row
        pos = np.flatnonzero(values > 0)
        neg = np.flatnonzero(values < 0)
        zer = np.flatnonzero(values == 0)
        bit = 1 << step
        if neg.size == 0:
            zeros = [z | bit if values[i] == 0 else z for i, z in enumerate(zeros)]
            continue
        new_rays, new_zeros = _combine(rays, zeros, values, pos, neg, d, step)
        keep = np.concatenate([pos, zer])
        kept_zeros = [zeros[i] for i in pos] + [zeros[i] | bit for i in zer]
        if new_rays:
            block = np.asarray(new_rays, dtype=np.int64)
            rays = np.vstack([rays[keep], block])
        else:
            rays = rays[keep]
        zeros = kept_zeros + new_zeros
        if len(rays) > facet_budget:
            raise ResourceLimitError(
                f"double description exceeded the facet budget ({len(rays)} > {facet_budget}); "
                "compute the hull externally and use import_hrep"
            )
        logger.debug("dd step %d/%d: %d rays", step + 1, m, len(rays))
    return rays


def _combine(rays, zeros, values, pos, neg, d, step):
    """New rays from every adjacent (positive, negative) pair."""
    nrays = len(zeros)
    # constraint -> bitset over ray ids tight on it
    tight_on: dict[int, int] = {}
    for rid, z in enumerate(zeros):
        while z:
            low = z & -z
            c = low.bit_length() - 1
            tight_on[c] = tight_on.get(c, 0) | (1 << rid)
            z ^= low
    need = d - 2
    pos_z = [zeros[i] for i in pos]
    new_rays, new_zeros = [], []
    bit = 1 << step
    for j in neg:
        zj = zeros[j]
        vj = int(values[j])
        for pi, i in enumerate(pos):
            common = pos_z[pi] & zj
            if common.bit_count() < need:
                continue
            pair = (1 << int(i)) | (1 << int(j))
            acc = (1 << nrays) - 1
            c_bits = common
            while c_bits:
                low = c_bits & -c_bits
                acc &= tight_on[low.bit_length() - 1]
                c_bits ^= low
                if acc == pair:
                    break
            if acc != pair:
                continue
            vi = int(values[i])
            ri = rays[i]
            rj = rays[j]
            if np.abs(ri).max() * abs(vj) + np.abs(rj).max() * vi >= _INT_LIMIT:
                raise ResourceLimitError("integer overflow risk in ray combination")
            new = vi * rj - vj * ri
            g = int(np.gcd.reduce(np.abs(new)))
            if g > 1:
                new = new // g
            new_rays.append(new)
            new_zeros.append(common | bit)
    return new_rays, new_zeros


def _affine_hull(points: np.ndarray):
    """Equations ``c . p + e = 0`` satisfied by all points, and a coordinate
    subset whose projection is injective on the affine hull."""
    ones = np.ones((len(points), 1), dtype=np.int64)
    eqs = _nullspace_int(np.hstack([points, ones]))
    cols = _rank_select(np.hstack([ones, points]).T)
    coords = [c - 1 for c in cols if c > 0]
    return eqs, coords


def compute_hrep(points, *, facet_budget: int = DEFAULT_FACET_BUDGET) -> HRep:
    """Facets (and equations) of the convex hull of the given 0/1 points.

    ``points`` is a ``k x d`` 0/1 matrix.  Output does not depend on the row
    order of ``points``.
    """
    points = np.asarray(points, dtype=np.int64)
    if points.ndim != 2 or len(points) == 0:
        raise ValidationError("compute_hrep needs a non-empty 2-D point array")
    dim = points.shape[1]
    if dim > MAX_DIM:
        raise ResourceLimitError(f"dimension {dim} exceeds {MAX_DIM}; use import_hrep")
    # canonical insertion order: ascending big-endian index, duplicates dropped
    weights = 1 << np.arange(dim - 1, -1, -1, dtype=np.int64)
    idx = np.unique(points @ weights)
    points = ((idx[:, None] >> np.arange(dim - 1, -1, -1)) & 1).astype(np.int64)

    eq_rows, coords = _affine_hull(points)
    equations = [Inequality.from_row(r) for r in eq_rows]
    sub = points[:, coords]
    if len(coords) == 0:
        return HRep(dim, [], equations)
    gens = np.hstack([sub, np.ones((len(sub), 1), dtype=np.int64)])
    rays = _double_description(gens, facet_budget)
    facets = set()
    for ray in rays:
        coeffs = [0] * dim
        for c, a in zip(coords, ray[:-1]):
            coeffs[c] = int(a)
        if not any(coeffs):
            continue
        facets.add(Inequality(tuple(coeffs), int(ray[-1])))
    return HRep(dim, sorted(facets), equations)


def hrep_of(transitions: Transitions, **kwargs) -> HRep:
    return compute_hrep(transitions.possible_points(), **kwargs)


# -- validation, import and export -----------------------------------------------

def check_hrep(hrep: HRep, transitions: Transitions, *, require_complete: bool = True):
    """Raise if a possible point violates a row, or an impossible point survives."""
    if hrep.dim != transitions.dim:
        raise DimensionError(f"hull of dim {hrep.dim} for a {transitions.dim}-dim point space")
    cube = all_points(transitions.n)
    mat = hrep.matrix()
    if len(mat) == 0:
        if require_complete and transitions.impossible.size:
            raise CompletenessError("empty model removes no impossible point",
                                    transitions.impossible.tolist())
        return
    rows = hrep.as_inequalities()
    values = evaluate_matrix(mat, cube[transitions.possible])
    bad = np.argwhere(values < 0)
    if bad.size:
        r, p = bad[0]
        raise ValidationError(
            f"inequality {to_text(rows[r]).strip()} violates possible point {int(transitions.possible[p])}"
        )
    if require_complete and transitions.impossible.size:
        survive = (evaluate_matrix(mat, cube[transitions.impossible]) >= 0).all(axis=0)
        if survive.any():
            pts = transitions.impossible[survive].tolist()
            raise CompletenessError(
                f"{len(pts)} impossible point(s) satisfy every inequality, e.g. {pts[0]}", pts
            )


def possible_checksum(transitions: Transitions) -> str:
    data = ",".join(map(str, transitions.possible.tolist())).encode()
    return hashlib.sha256(data).hexdigest()[:16]


def export_hrep(hrep: HRep, transitions: Transitions, path, fmt: str | None = None):
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "text")
    header = {
        "n": transitions.n,
        "possible": int(transitions.possible.size),
        "impossible": int(transitions.impossible.size),
        "checksum": possible_checksum(transitions),
    }
    if fmt == "json":
        payload = dict(header)
        payload["inequalities"] = [{"coeffs": list(q.coeffs), "constant": q.constant}
                                   for q in hrep.inequalities]
        payload["equations"] = [{"coeffs": list(q.coeffs), "constant": q.constant}
                                for q in hrep.equations]
        path.write_text(json.dumps(payload, indent=1) + "\n")
        return
    lines = ["# " + " ".join(f"{k}={v}" for k, v in header.items())]
    lines += [to_text(q) for q in hrep.inequalities]
    lines += [to_text(q).replace(">=", "==") for q in hrep.equations]
    path.write_text("\n".join(lines) + "\n")


def _read_header(line: str) -> dict:
    fields = dict(tok.split("=", 1) for tok in line.lstrip("#").split() if "=" in tok)
    return fields


def import_hrep(path, transitions: Transitions) -> HRep:
    """Load an inequality list and re-verify it against the DDT partition.

    Accepts the JSON export, or text with one inequality per line (optional
    ``#`` header carrying ``checksum=...``).  Raises ``ValidationError`` when
    a possible point is violated and ``CompletenessError`` when an impossible
    point survives.
    """
    path = Path(path)
    text = path.read_text()
    n = transitions.n
    inequalities, equations, header = [], [], {}
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        header = {k: obj[k] for k in ("n", "checksum") if k in obj}
        inequalities = [Inequality(tuple(q["coeffs"]), q["constant"]) for q in obj.get("inequalities", [])]
        equations = [Inequality(tuple(q["coeffs"]), q["constant"]) for q in obj.get("equations", [])]
    else:
        for line in text.splitlines():
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                header.update(_read_header(stripped))
                continue
            if "==" in stripped:
                equations.append(parse_text(stripped.replace("==", ">="), n))
            else:
                inequalities.append(parse_text(stripped, n))
    if "n" in header and int(header["n"]) != n:
        raise DimensionError(f"file is for n={header['n']}, SBox has n={n}")
    if "checksum" in header and header["checksum"] != possible_checksum(transitions):
        raise ValidationError("hull file was computed for a different possible-point set")
    hrep = HRep(2 * n, sorted(set(inequalities)), equations)
    check_hrep(hrep, transitions)
    return hrep
