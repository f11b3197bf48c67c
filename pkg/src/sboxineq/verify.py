"""Exhaustive certification of inequality models against a DDT."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CertificationError, DimensionError
from .inequality import Inequality, as_matrix, evaluate_matrix, to_text
from .sbox import SBox, Transitions, all_points, transitions_of


@dataclass
class CertificationReport:
    n: int
    size: int
    violated_possible: list[int]
    surviving_impossible: list[int]

    @property
    def sound(self) -> bool:
        return not self.violated_possible

    @property
    def complete(self) -> bool:
        return not self.surviving_impossible

    @property
    def passed(self) -> bool:
        return self.sound and self.complete

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "size": self.size,
            "passed": self.passed,
            "violated_possible": self.violated_possible,
            "surviving_impossible": self.surviving_impossible,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"model: {self.size} inequalities, n={self.n}"]
        lines.append(f"possible points violated: {len(self.violated_possible)}")
        for p in self.violated_possible[:20]:
            lines.append(f"  {p:#x}")
        lines.append(f"impossible points surviving: {len(self.surviving_impossible)}")
        for p in self.surviving_impossible[:20]:
            lines.append(f"  {p:#x}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)

    def raise_for_failure(self):
        if not self.passed:
            raise CertificationError(
                f"model fails certification: {len(self.violated_possible)} possible points "
                f"violated, {len(self.surviving_impossible)} impossible points surviving"
            )


def _transitions(sbox) -> Transitions:
    return sbox if isinstance(sbox, Transitions) else transitions_of(sbox)


def _values(inequalities, n: int) -> np.ndarray:
    """``(m, 2^{2n})`` evaluations over the whole cube."""
    inequalities = list(inequalities)
    for q in inequalities:
        if q.dim != 2 * n:
            raise DimensionError(f"inequality of dim {q.dim} for an {n}-bit SBox")
    if not inequalities:
        return np.zeros((0, 1 << (2 * n)), dtype=np.int64)
    return evaluate_matrix(as_matrix(inequalities), all_points(n))


def certify_model(sbox: SBox | Transitions, inequalities) -> CertificationReport:
    """Check every point of the binary cube against the model.

    Possible points must satisfy every inequality; impossible points must
    violate at least one.
    """
    tr = _transitions(sbox)
    inequalities = list(inequalities)
    values = _values(inequalities, tr.n)
    satisfied_all = (values >= 0).all(axis=0)
    return CertificationReport(
        n=tr.n,
        size=len(inequalities),
        violated_possible=[int(p) for p in tr.possible if not satisfied_all[p]],
        surviving_impossible=[int(p) for p in tr.impossible if satisfied_all[p]],
    )


@dataclass
class ModelDiff:
    size_a: int
    size_b: int
    report_a: CertificationReport
    report_b: CertificationReport
    only_a: list[int] = field(default_factory=list)
    only_b: list[int] = field(default_factory=list)
    attribution: dict[int, tuple[list[int], list[int]]] = field(default_factory=dict)

    @property
    def same_cut(self) -> bool:
        """Both models carve out the same set of cube points."""
        return not self.only_a and not self.only_b

    @property
    def identical(self) -> bool:
        return self.same_cut and not self.attribution

    def to_dict(self) -> dict:
        return {
            "size_a": self.size_a,
            "size_b": self.size_b,
            "size_delta": self.size_b - self.size_a,
            "certified_a": self.report_a.passed,
            "certified_b": self.report_b.passed,
            "removed_only_by_a": self.only_a,
            "removed_only_by_b": self.only_b,
            "attribution": {str(p): {"a": a, "b": b} for p, (a, b) in self.attribution.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [
            f"model A: {self.size_a} inequalities ({'PASS' if self.report_a.passed else 'FAIL'})",
            f"model B: {self.size_b} inequalities ({'PASS' if self.report_b.passed else 'FAIL'})",
            f"size delta (B - A): {self.size_b - self.size_a:+d}",
            f"points removed only by A: {len(self.only_a)}",
            f"points removed only by B: {len(self.only_b)}",
            f"impossible points with different removers: {len(self.attribution)}",
        ]
        return "\n".join(lines)


def _canonical_removers(inequalities, mask: np.ndarray) -> list[list[str]]:
    """Per point, the sorted texts of the inequalities removing it."""
    texts = [to_text(q) for q in inequalities]
    return [sorted(texts[i] for i in np.flatnonzero(col)) for col in mask.T]


def diff_models(model_a, model_b, sbox: SBox | Transitions) -> ModelDiff:
    """Compare two models point by point on the binary cube.

    ``attribution`` maps each impossible point whose set of removing
    inequalities differs to the member indices (into each model) removing it.
    """
    tr = _transitions(sbox)
    a, b = list(model_a), list(model_b)
    va, vb = _values(a, tr.n) < 0, _values(b, tr.n) < 0
    cut_a, cut_b = va.any(axis=0), vb.any(axis=0)
    imp = tr.impossible
    ra = _canonical_removers(a, va[:, imp])
    rb = _canonical_removers(b, vb[:, imp])
    attribution = {}
    for j, p in enumerate(imp):
        if ra[j] != rb[j]:
            attribution[int(p)] = (
                [int(i) for i in np.flatnonzero(va[:, p])],
                [int(i) for i in np.flatnonzero(vb[:, p])],
            )
    return ModelDiff(
        size_a=len(a),
        size_b=len(b),
        report_a=certify_model(tr, a),
        report_b=certify_model(tr, b),
        only_a=[int(p) for p in np.flatnonzero(cut_a & ~cut_b)],
        only_b=[int(p) for p in np.flatnonzero(cut_b & ~cut_a)],
        attribution=attribution,
    )
