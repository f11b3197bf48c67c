import pytest
from hypothesis import given, strategies as st

from sboxineq.exceptions import DimensionError, ValidationError
from sboxineq.inequality import (
    Inequality,
    dumps_json,
    evaluate,
    evaluate_matrix,
    from_json,
    normalize,
    parse_text,
    removal_set,
    single_point_cut,
    to_json,
    to_text,
    variable_names,
)
from sboxineq.sbox import all_points, index_to_bits

coeffs8 = st.lists(st.integers(-9, 9), min_size=8, max_size=8).filter(any)
ineqs8 = st.builds(lambda c, b: Inequality(tuple(c), b), coeffs8, st.integers(-30, 30))


def test_gcd_normalization():
    q = normalize((2, -4, 0, 6), -8)
    assert q.coeffs == (1, -2, 0, 3) and q.constant == -4
    assert normalize((3, 3), 1) == Inequality((3, 3), 1)
    assert normalize((2, 4), 6) == normalize((1, 2), 3)


def test_zero_vector_rejected():
    with pytest.raises(ValidationError):
        Inequality((0, 0, 0, 0), 3)


@given(ineqs8, st.integers(1, 5))
def test_scaling_is_invisible(q, factor):
    c, b = q.scaled(factor)
    assert Inequality(c, b) == q


def test_evaluate_by_index_and_bits():
    q = Inequality((1, 1, 1, 1, 1, 1, 1, 1), -1)
    assert evaluate(q, 0) == -1
    assert evaluate(q, 0xFF) == 7
    assert evaluate(q, (1, 0, 0, 0, 0, 0, 0, 0)) == 0
    with pytest.raises(DimensionError):
        evaluate(q, (1, 0))


def test_addition_sums_constants():
    a = Inequality((1, 0, 0, 0), 0)
    b = Inequality((0, -1, 0, 0), 1)
    assert a + b == Inequality((1, -1, 0, 0), 1)


@given(st.integers(0, 255))
def test_single_point_cut_removes_exactly_that_point(p):
    cut = single_point_cut(index_to_bits(p, 4))
    values = evaluate_matrix([cut.row()], all_points(4))[0]
    assert values[p] == -1
    assert (values < 0).sum() == 1


def test_variable_names_and_rendering():
    assert variable_names(4) == ["x3", "x2", "x1", "x0", "y3", "y2", "y1", "y0"]
    q = Inequality((-1, -2, -2, -1, 4, 5, 5, 5), 0)
    assert to_text(q) == " - 1x3 - 2x2 - 2x1 - 1x0 + 4y3 + 5y2 + 5y1 + 5y0 >= 0"
    q = Inequality((0, 2, 2, -1, 1, 1, -1, 1), 4)
    assert to_text(q).endswith("+ 1y0 >= -4") and to_text(q).startswith(" + 0x3")


@given(ineqs8)
def test_text_round_trip(q):
    assert parse_text(to_text(q), 4) == q


@given(ineqs8)
def test_json_round_trip(q):
    assert from_json(to_json(q)) == q


def test_parse_variants():
    ref = Inequality((1, 0, 0, 0, 0, 0, 0, -1), 2)
    assert parse_text("x3 - y0 + 2 >= 0", 4) == ref
    assert parse_text("x3 - y0 >= -2", 4) == ref
    assert parse_text("-x3 + y0 <= 2", 4) == ref
    assert parse_text("1x3 - 1y0 ≥ -2", 4) == ref
    assert parse_text("x3 >= y0 - 2", 4) == ref
    with pytest.raises(ValidationError):
        parse_text("x3 + y0", 4)
    with pytest.raises(DimensionError):
        parse_text("x7 >= 0", 4)


def test_removal_set():
    q = Inequality((-1, 0, 0, 0, 0, 0, 0, 0), 0)  # forbids x3 = 1
    rs = removal_set(q, [0x80, 0x81, 0x01], possible=[0x00])
    assert rs.removed == {0x80, 0x81} and not rs.violates_possible
    assert removal_set(q, [0x01], possible=[0x90]).violates_possible


def test_dumps_json_carries_extra_fields():
    text = dumps_json([Inequality((1, 0, 0, 0), 0)], n=2)
    assert '"n": 2' in text and '"constant": 0' in text
