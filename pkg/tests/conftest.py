import random
from fractions import Fraction

import pytest

from finite_ramanujan.sieve import ArithTable, build_sieve


@pytest.fixture(scope="session")
def sieve1k():
    return build_sieve(1000)


@pytest.fixture(scope="session")
def sieve_big():
    # covers Ingham at N = 10^6 with h up to 6 and sweeps up to 2^20 + 6
    return build_sieve(2**20 + 16)


def random_exact_table(rng: random.Random, n: int, label="rand") -> ArithTable:
    """Small signed rationals, about a third of them zero."""
    vals = []
    for _ in range(n):
        if rng.random() < 0.3:
            vals.append(Fraction(0))
        else:
            vals.append(Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
    return ArithTable.from_values(vals, "exact", label)


@pytest.fixture
def rng():
    return random.Random(20161018)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
