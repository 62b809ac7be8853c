import numpy as np
import pytest

from permsample import Instance

FIG1 = [
    [1, 0, 1, 0],
    [1, 1, 0, 1],
    [1, 1, 1, 1],
    [0, 0, 1, 0],
]


def five_by_five_rows_four():
    """All row sums 4 and an all-ones first column."""
    a = np.ones((5, 5), dtype=int)
    for i in range(5):
        a[i, 1 + i % 4] = 0
    return Instance(a)


def random_instance(rng, n_max=8, p_low=0.3, p_high=1.0, n_min=1):
    """Random 0-1 instance without zero rows."""
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        p = rng.uniform(p_low, p_high)
        a = (rng.random((n, n)) < p).astype(int)
        if a.sum(axis=1).min() > 0:
            return Instance(a)


@pytest.fixture
def fig1():
    return Instance(np.array(FIG1))


@pytest.fixture
def five():
    return five_by_five_rows_four()


_criteria = []


def record_criterion(number, passed, detail):
    _criteria.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_criteria, key=lambda c: c[0]):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {detail}")
