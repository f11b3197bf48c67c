import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sboxineq.exceptions import InfeasibleCoverError, ValidationError
from sboxineq.greedy import greedy_random_tiebreaker, greedy_reduce
from sboxineq.pool import conditional_pool, hull_pool
from sboxineq.sbox import split_transitions
from sboxineq.setcover import CoverInstance, solve_exact

from conftest import TOY_SETS, tr_hull


def toy():
    return CoverInstance.from_sets(TOY_SETS)


def is_cover(mat, rows):
    return mat.shape[1] == 0 or mat[rows].any(axis=0).all()


def test_plain_greedy_on_toy_instance():
    run = greedy_reduce(toy())
    assert [TOY_SETS[i] for i in run.selected] == [{1, 2, 3}, {4, 5}, {6, 7}]


def test_random_tiebreaker_finds_both_sizes():
    run = greedy_random_tiebreaker(toy(), seed=0, restarts=1000)
    assert set(run.histogram()) == {3, 4}
    assert run.best_size == 3


def test_greedy_on_conditional_pool_takes_every_cut():
    tr, _ = tr_hull("PRESENT")
    run = greedy_reduce(conditional_pool(tr))
    assert run.best_size == tr.impossible.size


def test_empty_impossible_set():
    tr = split_transitions(np.ones((4, 4), dtype=int))
    assert greedy_reduce(conditional_pool(tr)).selected == []


def test_uncovered_point_is_named():
    mat = np.array([[1, 0, 0], [1, 1, 0]], dtype=bool)
    inst = CoverInstance(mat, np.arange(2), np.array([10, 11, 12]))
    with pytest.raises(InfeasibleCoverError) as err:
        greedy_reduce(inst)
    assert err.value.point == 12


def test_restarts_validated():
    with pytest.raises(ValidationError):
        greedy_random_tiebreaker(toy(), restarts=0)


@pytest.mark.parametrize("name,published", [("MIBS", 24), ("LBlock S0", 25), ("Serpent S7", 21)])
def test_random_greedy_near_published(name, published):
    tr, hrep = tr_hull(name)
    run = greedy_random_tiebreaker(hull_pool(hrep, tr), seed=0, restarts=1000)
    assert run.best_size <= published + 2
    assert is_cover(hull_pool(hrep, tr).removal, run.selected)


def test_best_size_non_increasing_in_restarts():
    tr, hrep = tr_hull("MIBS")
    pool = hull_pool(hrep, tr)
    sizes = [greedy_random_tiebreaker(pool, seed=3, restarts=r).best_size for r in (1, 10, 100, 400)]
    assert sizes == sorted(sizes, reverse=True)


def test_seed_and_threads_reproducible():
    tr, hrep = tr_hull("PRESENT")
    pool = hull_pool(hrep, tr)
    a = greedy_random_tiebreaker(pool, seed=11, restarts=200, threads=1)
    b = greedy_random_tiebreaker(pool, seed=11, restarts=200, threads=4)
    assert a.selected == b.selected and a.sizes == b.sizes
    data = json.loads(a.dumps())
    assert sum(data["histogram"].values()) == 200


def test_heuristics_never_beat_exact():
    tr, hrep = tr_hull("LBlock S0")
    pool = hull_pool(hrep, tr)
    exact = solve_exact(pool.instance()).size
    assert greedy_reduce(pool).best_size >= exact
    assert greedy_random_tiebreaker(pool, seed=5, restarts=1).best_size >= exact


@given(
    st.lists(st.lists(st.booleans(), min_size=8, max_size=8), min_size=1, max_size=12),
    st.integers(0, 1000),
)
def test_selection_is_always_a_cover(rows, seed):
    mat = np.array(rows, dtype=bool)
    mat = mat[:, mat.any(axis=0)]
    inst = CoverInstance(mat, np.arange(mat.shape[0]), np.arange(mat.shape[1]))
    plain = greedy_reduce(inst)
    rand = greedy_random_tiebreaker(inst, seed=seed, restarts=5)
    assert is_cover(mat, plain.selected) and is_cover(mat, rand.selected)
    assert len(set(plain.selected)) == len(plain.selected)
