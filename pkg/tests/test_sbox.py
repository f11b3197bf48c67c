import numpy as np
import pytest
from hypothesis import given, strategies as st

from sboxineq.exceptions import SboxInputError
from sboxineq.sbox import (
    SBox,
    all_points,
    bits_to_index,
    compute_ddt,
    index_to_bits,
    load_sbox,
    parse_sbox,
    point_index,
    split_transitions,
    transitions_of,
)

from conftest import IDENTITY4


def brute_ddt(table):
    size = len(table)
    out = [[0] * size for _ in range(size)]
    for x in range(size):
        for dx in range(size):
            out[dx][table[x] ^ table[x ^ dx]] += 1
    return out


perms4 = st.permutations(list(range(16)))


@given(perms4)
def test_ddt_matches_brute_force(table):
    assert compute_ddt(SBox(tuple(table))).tolist() == brute_ddt(table)


@given(st.lists(st.integers(0, 7), min_size=8, max_size=8))
def test_ddt_rows_sum_to_size_for_any_function(table):
    ddt = compute_ddt(SBox(tuple(table)))
    assert (ddt.sum(axis=1) == 8).all()
    assert ddt[0, 0] == 8


def test_identity_ddt_is_diagonal():
    ddt = compute_ddt(IDENTITY4)
    assert (ddt == 16 * np.eye(16, dtype=int)).all()
    tr = transitions_of(IDENTITY4)
    assert tr.possible.size == 16 and tr.impossible.size == 240


def test_present_ddt_row():
    ddt = compute_ddt(parse_sbox("C56B90AD3EF84712"))
    # row for input difference 1 of the PRESENT SBox
    assert ddt[1].tolist() == [0, 0, 0, 4, 0, 0, 0, 4, 0, 4, 0, 0, 0, 4, 0, 0]


def test_index_convention_is_msb_first():
    assert point_index(0b1000, 0b0001, 4) == 0b10000001
    assert index_to_bits(0b10000001, 4) == (1, 0, 0, 0, 0, 0, 0, 1)
    assert bits_to_index((1, 0, 0, 0, 0, 0, 0, 1)) == 0b10000001


@given(st.integers(3, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (2 * n)) - 1))))
def test_index_round_trip(case):
    n, idx = case
    assert bits_to_index(index_to_bits(idx, n)) == idx
    assert tuple(all_points(n)[idx]) == index_to_bits(idx, n)


@pytest.mark.parametrize("table", [(0, 1, 2), tuple(range(4)), tuple(range(128)), (0,) * 15 + (16,)])
def test_bad_tables_rejected(table):
    with pytest.raises(SboxInputError):
        SBox(table)


def test_parse_forms():
    a = parse_sbox("C56B90AD3EF84712")
    b = parse_sbox("c 5 6 b 9 0 a d 3 e f 8 4 7 1 2")
    c = parse_sbox("0xC,0x5,0x6,0xB,0x9,0x0,0xA,0xD,0x3,0xE,0xF,0x8,0x4,0x7,0x1,0x2")
    assert a == b == c and a.bijective and a.n == 4
    with pytest.raises(SboxInputError):
        parse_sbox("")
    with pytest.raises(SboxInputError):
        parse_sbox("zz yy")


def test_load_sbox(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("# PRESENT\nC 5 6 B 9 0 A D 3 E F 8 4 7 1 2\n")
    assert load_sbox(f).table[0] == 12
    f.write_text("0 1\n2 3\n")
    with pytest.raises(SboxInputError):
        load_sbox(f)


def test_split_transitions_rejects_non_square():
    with pytest.raises(SboxInputError):
        split_transitions(np.zeros((4, 8)))
