import functools

import pytest

from nmds_elliptic.curves import weierstrass
from nmds_elliptic.field import field_of_order
from nmds_elliptic.lift import lift_curve

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def field(q):
    return field_of_order(q)


@functools.lru_cache(maxsize=None)
def wcurve(q, a, b):
    return weierstrass(field(q), a, b)


@functools.lru_cache(maxsize=None)
def wtrack(q, a, b):
    return lift_curve(wcurve(q, a, b))


@pytest.fixture
def gf7():
    return field(7)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@functools.lru_cache(maxsize=None)
def oracle(q, a, b):
    """(9-point hyperplane count, addable ranks) by brute force over PG(8, q)."""
    from oracles import addable_ranks, hyperplane_counts

    T = wtrack(q, a, b)
    counts = hyperplane_counts(T)
    return int((counts == 9).sum()), addable_ranks(T, counts)
