import numpy as np
import pytest
from hypothesis import given, strategies as st

from sboxineq.exceptions import ResourceLimitError
from sboxineq.hull import hrep_of
from sboxineq.inequality import Inequality, RemovalSet, evaluate
from sboxineq.pool import (
    CONDITIONAL,
    HULL,
    SUBSET_SUM,
    classify_counts,
    classify_sum,
    conditional_pool,
    hull_pool,
    hyperplanes_through,
    random_sum_pool,
    subset_addition_pool,
)
from sboxineq.sbox import all_points, split_transitions, transitions_of
from sboxineq.setcover import solve_exact

from conftest import IDENTITY4, tr_hull

# Frozen values from a pure-Python re-enumeration of the pool definition
PRESENT_K2_TYPE1 = 9037
PRESENT_K2_TYPE2 = 3745
PRESENT_ORIGIN_INCIDENT = 139


def _rs(count):
    return RemovalSet(Inequality((1, 0), 0), frozenset(range(count)))


@pytest.mark.parametrize(
    "counts,new,kind",
    [((12, 10), 12, "type2"), ((16, 10), 14, "type1"), ((5, 5), 5, "type2"), ((8, 6), 6, "rejected"),
     ((8, 6), 5, "rejected"), ((3, 4, 9), 9, "type2")],
)
def test_classify_sum(counts, new, kind):
    verdict = classify_sum([_rs(c) for c in counts], frozenset(range(new)))
    assert verdict.kind == kind
    assert (verdict.min_count, verdict.max_count, verdict.new_count) == (min(counts), max(counts), new)


@given(st.lists(st.integers(0, 50), min_size=2, max_size=4), st.integers(0, 60))
def test_classify_invariant(counts, new):
    v = classify_counts(new, counts)
    if new >= max(counts):
        assert v.kind == "type2"
    elif new > min(counts):
        assert v.kind == "type1"
    else:
        assert v.kind == "rejected"


def test_classify_needs_two():
    with pytest.raises(ValueError):
        classify_sum([_rs(3)], frozenset())


def test_hyperplanes_through_on_cube():
    from sboxineq.hull import compute_hrep

    hrep = compute_hrep(all_points(2))
    at_origin = hyperplanes_through(0, hrep)
    assert sorted(q.constant for q in at_origin) == [0] * 4
    at_ones = hyperplanes_through((1, 1, 1, 1), hrep)
    assert len(at_ones) == 4 and all(q.constant == 1 for q in at_ones)


def test_present_origin_incidence(present):
    _, hrep = present
    through = hyperplanes_through(0, hrep)
    assert len(through) == PRESENT_ORIGIN_INCIDENT
    assert all(evaluate(q, 0) == 0 for q in through)


def test_present_pool_sizes_match_oracle(present):
    tr, hrep = present
    assert len(subset_addition_pool(tr, hrep, 2, "type1")) == PRESENT_K2_TYPE1
    assert len(subset_addition_pool(tr, hrep, 2, "type2")) == PRESENT_K2_TYPE2


def test_pool_invariants(present):
    tr, hrep = present
    pool = subset_addition_pool(tr, hrep, 2)
    pool.check_sound()
    assert pool.removal.any(axis=1).all()
    assert pool.covers_all()
    assert len({tuple(r) for r in pool.rows}) == len(pool)
    # every row is gcd-normalized
    assert (np.gcd.reduce(np.abs(pool.rows), axis=1) == 1).all()
    kinds = pool.counts_by_kind()
    assert kinds[HULL] == len(hull_pool(hrep, tr)) and kinds[SUBSET_SUM] > 0
    subset_rows = pool.sources[pool.kinds == SUBSET_SUM]
    assert (subset_rows > 0).all()


def test_pool_is_thread_count_independent():
    tr, hrep = tr_hull("MIBS")
    a = subset_addition_pool(tr, hrep, 2, threads=1)
    b = subset_addition_pool(tr, hrep, 2, threads=4)
    assert np.array_equal(a.rows, b.rows) and np.array_equal(a.sources, b.sources)
    assert a.dumps() == b.dumps()


@pytest.mark.parametrize("name", ["PRESENT", "KLEIN", "LBlock S0"])
def test_origin_exclusion_keeps_optimum(name):
    tr, hrep = tr_hull(name)
    without = solve_exact(subset_addition_pool(tr, hrep, 2).instance())
    with_origin = solve_exact(subset_addition_pool(tr, hrep, 2, exclude_origin=False).instance())
    assert without.optimal and with_origin.optimal
    assert without.size == with_origin.size


def test_budget_errors(present):
    tr, hrep = present
    with pytest.raises(ResourceLimitError, match="point"):
        subset_addition_pool(tr, hrep, 3, max_sums=1000)
    with pytest.raises(ResourceLimitError, match="hyperplanes"):
        subset_addition_pool(tr, hrep, 2, max_incident=10)
    with pytest.raises(ValueError):
        subset_addition_pool(tr, hrep, 1)


def test_full_cube_has_nothing_to_remove():
    tr = split_transitions(np.ones((4, 4), dtype=int))
    from sboxineq.hull import compute_hrep

    hrep = compute_hrep(tr.possible_points())
    pool = subset_addition_pool(tr, hrep, 2)
    assert len(pool) == 0 and tr.impossible.size == 0
    assert solve_exact(pool.instance()).size == 0


def test_random_sum_pool(present):
    tr, hrep = present
    raw = hull_pool(hrep, tr)
    zero = random_sum_pool(tr, hrep, 2, trials=0)
    assert np.array_equal(zero.rows, raw.rows)
    a = random_sum_pool(tr, hrep, 2, trials=500, seed=7)
    b = random_sum_pool(tr, hrep, 2, trials=500, seed=7)
    assert a.dumps() == b.dumps() and len(a) > len(raw)
    a.check_sound()


def test_random_sum_never_worse_than_raw_hull():
    tr, hrep = tr_hull("LBlock S0")
    sol = solve_exact(random_sum_pool(tr, hrep, 2, trials=10_000, seed=1).instance())
    assert sol.optimal and sol.size <= 24


def test_conditional_pool_identity():
    tr = transitions_of(IDENTITY4)
    pool = conditional_pool(tr)
    assert len(pool) == 240
    assert (pool.removal.sum(axis=1) == 1).all()
    assert set(pool.kinds) == {CONDITIONAL}
    assert solve_exact(pool.instance()).size == 240


def test_union_with_conditional_never_hurts(present):
    tr, hrep = present
    raw = hull_pool(hrep, tr)
    both = raw | conditional_pool(tr)
    assert len(both) == len(raw) + tr.impossible.size
    assert np.array_equal(both.rows[: len(raw)], raw.rows)
    assert solve_exact(both.instance()).size <= solve_exact(raw.instance()).size


def test_union_keeps_first_provenance(present):
    tr, hrep = present
    pool = subset_addition_pool(tr, hrep, 2)
    merged = hull_pool(hrep, tr) | pool
    assert len(merged) == len(pool)
    assert merged.counts_by_kind() == pool.counts_by_kind()


def test_pool_dump(present):
    tr, hrep = present
    import json

    data = json.loads(hull_pool(hrep, tr).dumps())
    assert data["size"] == len(data["members"]) == 311
    m = data["members"][0]
    assert set(m) >= {"coeffs", "constant", "provenance", "removes"}
