import pytest

from sboxineq import corpus
from sboxineq.exceptions import SboxInputError
from sboxineq.sbox import transitions_of

from conftest import tr_hull


def test_names_unique_and_counts():
    names = corpus.names()
    assert len(names) == len(set(names))
    assert len(corpus.names(family="LBlock")) == 10
    assert len(corpus.names(family="Serpent")) == 32
    assert len(corpus.names(family="Serpent-1")) == 8
    assert {"ASCON", "SC2000-5", "FIDES-5", "APN-6", "SC2000-6"} <= set(names)


@pytest.mark.parametrize("name", corpus.names())
def test_checksums_hold(name):
    entry = corpus.get(name)
    assert len(transitions_of(entry.sbox).impossible) == entry.impossible_count
    assert entry.upstream


def test_lookup_is_forgiving():
    assert corpus.get("lblock_s0").name == "LBlock S0"
    assert corpus.get("MIDORI-S1").name == "Midori S1"
    with pytest.raises(SboxInputError):
        corpus.get("Serpent S32")


def test_published_values_carry_table_provenance():
    e = corpus.get("Serpent S3")
    assert e.value("t1:sagemath") == 396 and e.value("t2:k3") == 14
    assert corpus.get("Serpent-1 S7").value("t2:sasaki-todo") == 27
    assert corpus.get("ASCON").value("t3:k2") == 31
    assert corpus.get("MIBS").value("t4:k2-seconds") == 1.9
    for entry in corpus.entries():
        assert all(key.split(":")[0] in ("t1", "t2", "t3", "t4") for key in entry.published)


@pytest.mark.parametrize("name", corpus.names(max_n=4))
def test_four_bit_facet_counts(name):
    published = corpus.get(name).value("t1:sagemath")
    if published is None:
        pytest.skip("no published facet count")
    tr, hrep = tr_hull(name)
    assert len(hrep) == published and not hrep.equations


def test_bijective_except_none():
    assert all(e.sbox.bijective for e in corpus.entries())
