"""scikit-learn style front end.

``SboxModeler().fit(sbox)`` learns a minimal inequality model of the DDT.
Afterwards ``predict`` tells which 2n-bit difference points the model
admits, ``transform`` returns the slack ``a . v + b`` of every inequality,
and ``score`` is the agreement with the true possible/impossible split.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DimensionError, SboxInputError, ValidationError
from .hull import hrep_of
from .inequality import as_matrix
from .pipeline import METHODS, Budget, reduce_sbox
from .pool import TYPE1, TYPE2
from .sbox import SBox, Transitions, all_points, parse_sbox, split_transitions, transitions_of


def check_sbox(X) -> SBox | Transitions:
    """Coerce ``X`` to an ``SBox`` (or ``Transitions`` for a DDT).

    Accepts an ``SBox``, a corpus name or hex string, a flat lookup table,
    or a square DDT.
    """
    if isinstance(X, (SBox, Transitions)):
        return X
    if isinstance(X, str):
        from . import corpus

        try:
            return corpus.get(X).sbox
        except SboxInputError:
            return parse_sbox(X)
    arr = np.asarray(X)
    if arr.ndim == 1:
        if not np.issubdtype(arr.dtype, np.integer):
            raise SboxInputError("lookup table entries must be integers")
        return SBox(tuple(int(v) for v in arr))
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        return split_transitions(check_array(arr, dtype=np.int64))
    raise SboxInputError(f"cannot interpret input of shape {arr.shape} as an SBox or DDT")


def check_points(P, n: int) -> np.ndarray:
    """Coerce to an ``(m, 2n)`` 0/1 matrix; 1-D integer input is read as point indices."""
    arr = np.asarray(P)
    if arr.ndim <= 1:
        idx = np.atleast_1d(arr).astype(np.int64)
        if ((idx < 0) | (idx >= 1 << (2 * n))).any():
            raise DimensionError(f"point index out of range for n={n}")
        return all_points(n)[idx].astype(np.int64)
    arr = check_array(arr, dtype=np.int64)
    if arr.shape[1] != 2 * n:
        raise DimensionError(f"expected {2 * n} columns, got {arr.shape[1]}")
    if ((arr != 0) & (arr != 1)).any():
        raise ValidationError("points must be 0/1 vectors")
    return arr


class SboxModeler(TransformerMixin, BaseEstimator):
    def __init__(
        self,
        method: str = "subset-addition",
        k: int = 2,
        filter: str = TYPE1,
        seed: int = 0,
        restarts: int = 1000,
        trials: int = 10_000,
        threads: int | None = None,
        exclude_origin: bool = True,
        time_limit: float = 60.0,
    ):
        self.method = method
        self.k = k
        self.filter = filter
        self.seed = seed
        self.restarts = restarts
        self.trials = trials
        self.threads = threads
        self.exclude_origin = exclude_origin
        self.time_limit = time_limit

    def _validate_params(self):
        if self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}")
        if self.filter not in (TYPE1, TYPE2):
            raise ValidationError("filter must be 'type1' or 'type2'")
        if int(self.k) < 2:
            raise ValidationError("k must be at least 2")
        if int(self.restarts) < 1:
            raise ValidationError("restarts must be at least 1")

    def fit(self, X, y=None):
        self._validate_params()
        target = check_sbox(X)
        tr = target if isinstance(target, Transitions) else transitions_of(target)
        hrep = None if self.method == "conditional" else hrep_of(tr)
        result = reduce_sbox(
            tr,
            self.method,
            k=int(self.k),
            filter=self.filter,
            seed=self.seed,
            restarts=int(self.restarts),
            trials=int(self.trials),
            threads=self.threads,
            exclude_origin=self.exclude_origin,
            budget=Budget(time_limit=self.time_limit),
            hrep=hrep,
        )
        self.transitions_ = tr
        self.hrep_ = hrep
        self.result_ = result
        self.inequalities_ = result.inequalities
        self.n_bits_ = tr.n
        self.n_features_in_ = tr.dim
        return self

    def transform(self, X):
        """Slack of each inequality at each point, shape ``(m, n_inequalities)``."""
        check_is_fitted(self, "inequalities_")
        pts = check_points(X, self.n_bits_)
        mat = as_matrix(self.inequalities_)
        return pts @ mat[:, :-1].T + mat[:, -1]

    def predict(self, X):
        """True where the model admits the point."""
        return (self.transform(X) >= 0).all(axis=1)

    def score(self, X, y=None):
        """Accuracy against ``y`` or, by default, the true DDT possibility."""
        check_is_fitted(self, "inequalities_")
        pts = check_points(X, self.n_bits_)
        if y is None:
            idx = pts @ (1 << np.arange(self.n_features_in_ - 1, -1, -1))
            y = np.isin(idx, self.transitions_.possible)
        return float(np.mean(self.predict(pts) == np.asarray(y, dtype=bool)))
