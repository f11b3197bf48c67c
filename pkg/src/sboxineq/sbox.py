"""SBox parsing, difference distribution tables and the point-space split.

A differential transition ``u -> v`` of an ``n``-bit SBox is encoded as a
point of ``{0,1}^(2n)``.  Coordinate 0 is the most significant bit of the
input difference ``u`` and coordinate ``2n-1`` is the least significant bit
of the output difference ``v``.  The integer index of a point is therefore
``(u << n) | v`` read big-endian.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import SboxInputError

MIN_BITS = 3
MAX_BITS = 6


@dataclass(frozen=True)
class SBox:
    """An ``n``-bit lookup table ``S: F_2^n -> F_2^n``."""

    table: tuple[int, ...]
    n: int = field(init=False)
    bijective: bool = field(init=False)

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        size = len(table)
        n = size.bit_length() - 1
        if size == 0 or 1 << n != size:
            raise SboxInputError(f"table length {size} is not a power of two")
        if not MIN_BITS <= n <= MAX_BITS:
            raise SboxInputError(
                f"{n}-bit SBoxes are not supported (expected {MIN_BITS}..{MAX_BITS})"
            )
        for i, v in enumerate(table):
            if not 0 <= v < size:
                raise SboxInputError(f"entry {i} = {v} is outside [0, {size})")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bijective", len(set(table)) == size)

    def __len__(self):
        return len(self.table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def hex(self) -> str:
        width = (self.n + 3) // 4
        return " ".join(f"{v:0{width}X}" for v in self.table)


def parse_sbox(text: str) -> SBox:
    """Parse one line of whitespace- or comma-separated hex words.

    A single unseparated word of 8 or 16 digits is read one nibble per entry
    (``"C56B90AD3EF84712"``).
    """
    words = [w for w in re.split(r"[\s,]+", text.strip()) if w]
    if not words:
        raise SboxInputError("empty SBox definition")
    if len(words) == 1 and len(words[0]) in (8, 16):
        words = list(words[0])
    try:
        table = [int(w, 16) for w in words]
    except ValueError as exc:
        raise SboxInputError(f"not a hex word list: {exc}") from None
    return SBox(tuple(table))


def load_sbox(path) -> SBox:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    lines = [ln for ln in lines if not ln.lstrip().startswith("#")]
    if len(lines) != 1:
        raise SboxInputError(f"{path}: expected a single line of hex words")
    return parse_sbox(lines[0])


def compute_ddt(sbox: SBox) -> np.ndarray:
    """Return the ``2^n x 2^n`` difference distribution table.

    ``ddt[u, v]`` counts the inputs ``w`` with ``S(w) ^ S(w ^ u) == v``.
    """
    if not isinstance(sbox, SBox):
        sbox = SBox(tuple(sbox))
    size = len(sbox)
    table = np.asarray(sbox.table, dtype=np.int64)
    w = np.arange(size)
    ddt = np.zeros((size, size), dtype=np.int64)
    for u in range(size):
        np.add.at(ddt[u], table ^ table[w ^ u], 1)
    return ddt


def point_index(u: int, v: int, n: int) -> int:
    return (u << n) | v


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    dim = 2 * n
    return tuple((index >> (dim - 1 - i)) & 1 for i in range(dim))


def bits_to_index(bits) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    return index


def all_points(n: int) -> np.ndarray:
    """All ``2^(2n)`` binary points as an int8 matrix, row ``i`` = index ``i``."""
    dim = 2 * n
    idx = np.arange(1 << dim)
    shifts = np.arange(dim - 1, -1, -1)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


@dataclass(frozen=True)
class Transitions:
    """The possible/impossible partition of ``{0,1}^(2n)`` for one DDT.

    Both index arrays are sorted ascending.
    """

    n: int
    possible: np.ndarray
    impossible: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.n

    def possible_points(self) -> np.ndarray:
        return all_points(self.n)[self.possible]

    def impossible_points(self) -> np.ndarray:
        return all_points(self.n)[self.impossible]


def split_transitions(ddt) -> Transitions:
    """Partition the point space into possible (count > 0) and impossible points."""
    ddt = np.asarray(ddt)
    size = ddt.shape[0]
    if ddt.shape != (size, size) or size & (size - 1):
        raise SboxInputError(f"malformed DDT of shape {ddt.shape}")
    n = size.bit_length() - 1
    flat = ddt.reshape(-1)
    return Transitions(
        n=n,
        possible=np.flatnonzero(flat > 0),
        impossible=np.flatnonzero(flat == 0),
    )


def transitions_of(sbox: SBox) -> Transitions:
    return split_transitions(compute_ddt(sbox))
