"""Integer affine inequalities ``a . v + b >= 0`` over the 2n difference bits."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .exceptions import DimensionError, ValidationError
from .sbox import index_to_bits


def _gcd_all(values) -> int:
    return reduce(math.gcd, (abs(int(v)) for v in values), 0)


@dataclass(frozen=True, order=True)
class Inequality:
    """``sum(coeffs[i] * v[i]) + constant >= 0``, gcd-normalized.

    ``coeffs`` follow the canonical point order: ``x_0 .. x_{n-1}`` (input
    difference, MSB first) then ``y_0 .. y_{n-1}``.
    """

    coeffs: tuple[int, ...]
    constant: int

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if not any(coeffs):
            raise ValidationError("inequality with an all-zero coefficient vector")
        g = _gcd_all(coeffs + (self.constant,))
        object.__setattr__(self, "coeffs", tuple(c // g for c in coeffs))
        object.__setattr__(self, "constant", int(self.constant) // g)

    @classmethod
    def from_row(cls, row) -> "Inequality":
        """Build from ``(a_0, ..., a_{d-1}, b)``."""
        row = [int(v) for v in row]
        return cls(tuple(row[:-1]), row[-1])

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def n(self) -> int:
        return self.dim // 2

    def row(self) -> tuple[int, ...]:
        return self.coeffs + (self.constant,)

    def scaled(self, factor: int) -> tuple[tuple[int, ...], int]:
        """Unnormalized ``(coeffs, constant)`` multiplied by ``factor``."""
        return tuple(c * factor for c in self.coeffs), self.constant * factor

    def __add__(self, other):
        if not isinstance(other, Inequality):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError(f"cannot add inequalities of dim {self.dim} and {other.dim}")
        return Inequality(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            self.constant + other.constant,
        )

    def __str__(self):
        return to_text(self)


def normalize(coeffs, constant) -> Inequality:
    return Inequality(tuple(coeffs), constant)


def evaluate(ineq: Inequality, point) -> int:
    """Return ``a . p + b``; the point satisfies ``ineq`` iff this is >= 0."""
    bits = index_to_bits(point, ineq.n) if isinstance(point, (int, np.integer)) else point
    if len(bits) != ineq.dim:
        raise DimensionError(f"point of dimension {len(bits)} for a {ineq.dim}-dim inequality")
    return sum(a * int(b) for a, b in zip(ineq.coeffs, bits)) + ineq.constant


def single_point_cut(point) -> Inequality:
    """The cut ``sum_{p_i=1} (1 - v_i) + sum_{p_i=0} v_i >= 1``.

    It evaluates to -1 at ``point`` and to >= 0 on every other vertex of the
    cube.
    """
    bits = [int(b) for b in point]
    coeffs = tuple(-1 if b else 1 for b in bits)
    return Inequality(coeffs, sum(bits) - 1)


def as_matrix(inequalities) -> np.ndarray:
    """Stack inequalities into an ``m x (d+1)`` int64 matrix (constant last)."""
    rows = [ineq.row() for ineq in inequalities]
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64)


def homogenize(points) -> np.ndarray:
    """Append a column of ones so that ``rows @ homogenize(P).T`` evaluates."""
    points = np.asarray(points, dtype=np.int64)
    return np.hstack([points, np.ones((points.shape[0], 1), dtype=np.int64)])


def evaluate_matrix(rows, points) -> np.ndarray:
    """Evaluate every inequality row at every point: shape ``(m, |points|)``."""
    rows = np.asarray(rows, dtype=np.int64)
    return rows @ homogenize(points).T


@dataclass(frozen=True)
class RemovalSet:
    """An inequality plus the impossible points (by index) it violates."""

    inequality: Inequality
    removed: frozenset
    violates_possible: bool = False

    def __len__(self):
        return len(self.removed)


def removal_set(ineq: Inequality, impossible, possible=None) -> RemovalSet:
    """Compute which of the ``impossible`` point indices ``ineq`` cuts off.

    When ``possible`` indices are given, also report whether any of them is
    violated (a sound model member never does that).
    """
    from .sbox import all_points

    cube = all_points(ineq.n)
    impossible = np.asarray(list(impossible), dtype=np.int64)
    values = evaluate_matrix([ineq.row()], cube[impossible])[0] if impossible.size else np.zeros(0)
    removed = frozenset(int(p) for p in impossible[values < 0])
    bad = False
    if possible is not None:
        possible = np.asarray(list(possible), dtype=np.int64)
        if possible.size:
            bad = bool((evaluate_matrix([ineq.row()], cube[possible])[0] < 0).any())
    return RemovalSet(ineq, removed, bad)


# -- text rendering ---------------------------------------------------------

def variable_names(n: int) -> list[str]:
    """Names in canonical coordinate order: ``x{n-1} .. x0, y{n-1} .. y0``.

    Coordinate 0 is the MSB of the input difference and is printed as
    ``x{n-1}``, matching the customary bit-numbered listings.
    """
    return [f"x{n - 1 - i}" for i in range(n)] + [f"y{n - 1 - i}" for i in range(n)]


def to_text(ineq: Inequality) -> str:
    """Render as `` - 1x3 + 2x2 ... + 5y0 >= -4``."""
    names = variable_names(ineq.n)
    terms = []
    for a, name in zip(ineq.coeffs, names):
        sign = "-" if a < 0 else "+"
        terms.append(f"{sign} {abs(a)}{name}")
    return " " + " ".join(terms) + f" >= {-ineq.constant}"


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*([xy])(\d+)")
_CONST = re.compile(r"([+-])\s*(\d+)(?![\dxy*])")


def _parse_side(text: str, n_hint):
    coeffs: dict[tuple[str, int], int] = {}
    for sign, mag, var, bit in _TERM.findall(text):
        value = int(mag) if mag else 1
        coeffs[(var, int(bit))] = coeffs.get((var, int(bit)), 0) + (-value if sign == "-" else value)
    rest = _TERM.sub(" ", text).strip()
    constant = 0
    if rest:
        if not re.fullmatch(r"([+-]?\s*\d+\s*)+", rest):
            raise ValidationError(f"cannot parse inequality fragment {rest!r}")
        for sign, mag in re.findall(r"([+-]?)\s*(\d+)", rest):
            constant += -int(mag) if sign == "-" else int(mag)
    return coeffs, constant


def parse_text(line: str, n: int | None = None) -> Inequality:
    """Parse a rendered inequality (``>=``, ``≥``, ``<=`` and ``≤`` accepted)."""
    line = line.replace("≥", ">=").replace("≤", "<=")
    if ">=" in line:
        lhs, rhs = line.split(">=", 1)
        flip = False
    elif "<=" in line:
        lhs, rhs = line.split("<=", 1)
        flip = True
    else:
        raise ValidationError(f"no comparison operator in {line!r}")
    lc, lk = _parse_side(lhs, n)
    rc, rk = _parse_side(rhs, n)
    for key, value in rc.items():
        lc[key] = lc.get(key, 0) - value
    constant = lk - rk
    if n is None:
        n = 1 + max((bit for _, bit in lc), default=0)
    coeffs = [0] * (2 * n)
    for (var, bit), value in lc.items():
        if bit >= n:
            raise DimensionError(f"variable {var}{bit} out of range for n={n}")
        pos = (n - 1 - bit) + (n if var == "y" else 0)
        coeffs[pos] = value
    if flip:
        coeffs = [-c for c in coeffs]
        constant = -constant
    return Inequality(tuple(coeffs), constant)


def to_json(ineq: Inequality) -> dict:
    return {"coeffs": list(ineq.coeffs), "constant": ineq.constant}


def from_json(obj) -> Inequality:
    return Inequality(tuple(obj["coeffs"]), obj["constant"])


def dumps_json(inequalities, **extra) -> str:
    payload = dict(extra)
    payload["inequalities"] = [to_json(q) for q in inequalities]
    return json.dumps(payload, indent=2)
