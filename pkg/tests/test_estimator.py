import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sboxineq import SboxModeler, corpus
from sboxineq.estimator import check_points, check_sbox
from sboxineq.exceptions import DimensionError, SboxInputError, ValidationError
from sboxineq.sbox import SBox, Transitions, all_points, compute_ddt


def test_params_and_clone():
    est = SboxModeler(method="exact", k=3, seed=4)
    params = est.get_params()
    assert params["method"] == "exact" and params["k"] == 3 and params["seed"] == 4
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(k=2)
    assert est.k == 2


def test_fit_predict_score_present():
    est = SboxModeler(method="subset-addition", k=2).fit("PRESENT")
    assert len(est.inequalities_) == 17 and est.result_.optimal
    cube = all_points(4)
    pred = est.predict(cube)
    assert np.array_equal(np.flatnonzero(pred), est.transitions_.possible)
    assert est.score(cube) == 1.0
    assert est.transform(cube).shape == (256, 17)
    assert np.array_equal(est.predict(np.arange(256)), pred)


def test_accepts_table_ddt_and_sbox():
    table = list(corpus.get("PRESENT").sbox.table)
    a = SboxModeler(method="exact").fit(table)
    b = SboxModeler(method="exact").fit(compute_ddt(SBox(tuple(table))))
    assert a.inequalities_ == b.inequalities_
    assert isinstance(check_sbox(compute_ddt(SBox(tuple(table)))), Transitions)
    assert check_sbox("c56b90ad3ef84712") == SBox(tuple(table))


def test_not_fitted():
    with pytest.raises(NotFittedError):
        SboxModeler().predict(np.zeros((1, 8), dtype=int))


@pytest.mark.parametrize(
    "params", [{"method": "magic"}, {"k": 1}, {"filter": "type3"}, {"restarts": 0}]
)
def test_bad_params(params):
    with pytest.raises(ValidationError):
        SboxModeler(**params).fit("PRESENT")


def test_input_validation():
    with pytest.raises(SboxInputError):
        check_sbox(np.zeros((2, 3, 4)))
    with pytest.raises(SboxInputError):
        check_sbox([0.5] * 16)
    with pytest.raises(DimensionError):
        check_points(np.zeros((3, 6), dtype=int), 4)
    with pytest.raises(ValidationError):
        check_points(np.full((1, 8), 2), 4)
    with pytest.raises(DimensionError):
        check_points([256], 4)


def test_score_with_labels():
    est = SboxModeler(method="greedy").fit("MIBS")
    cube = all_points(4)
    assert est.score(cube, np.zeros(256, dtype=bool)) == pytest.approx(1 - est.transitions_.possible.size / 256)
