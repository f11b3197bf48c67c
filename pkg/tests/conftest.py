from functools import lru_cache

import pytest
from hypothesis import settings

from sboxineq import corpus
from sboxineq.hull import hrep_of
from sboxineq.sbox import SBox, transitions_of

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

IDENTITY4 = SBox(tuple(range(16)))

# Small set system whose greedy cover is 3 or 4 depending on ties
TOY_SETS = [{1, 2}, {1, 2, 3}, {2, 3, 5}, {4, 5}, {6}, {6, 7}]


@lru_cache(maxsize=None)
def tr_hull(name: str):
    """``(transitions, hrep)`` for a corpus entry, computed once per session."""
    tr = transitions_of(corpus.get(name).sbox)
    return tr, hrep_of(tr)


@pytest.fixture(scope="session")
def present():
    return tr_hull("PRESENT")


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str):
    """Store the verdict for the summary, echo it, and fail the test if needed."""
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} | {detail}")
    assert ok, detail


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} | {detail}")
