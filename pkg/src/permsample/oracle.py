"""Ground truth for small instances."""

from __future__ import annotations

from collections import Counter
from typing import NamedTuple

import numpy as np
from scipy.sparse import bmat, csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.special import gammaincc

from .instance import Instance
from .sampler import Matching

MAX_EXACT_N = 30
MAX_ENUMERATED = 10**6


class EnumerationCapExceeded(RuntimeError):
    def __init__(self, partial_count):
        self.partial_count = partial_count
        super().__init__(f"more than {partial_count} perfect matchings; refusing to enumerate")


def _ryser(rows: list[list[int]]) -> int:
    """Inclusion-exclusion over column subsets, visited in Gray-code order.

    ``rows[j]`` lists the rows of a square block that hold a 1 in column j.
    Each step toggles one column, so the row sums update in O(n).
    """
    n = len(rows)
    sums = [0] * n
    total = 0
    size = 0
    for k in range(1, 1 << n):
        bit = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        if gray >> bit & 1:
            for i in rows[bit]:
                sums[i] += 1
            size += 1
        else:
            for i in rows[bit]:
                sums[i] -= 1
            size -= 1
        prod = 1
        for s in sums:
            if not s:
                break
            prod *= s
        else:
            total += -prod if (n - size) & 1 else prod
    return total


def exact_permanent(inst: Instance) -> int:
    """Exact permanent (number of perfect matchings) as a Python int.

    The bipartite graph is split into connected components and each square
    component goes through :func:`_ryser`. Cost is exponential in the largest
    component, so ``n`` is capped at 30.
    """
    n = inst.n
    if n > MAX_EXACT_N:
        raise ValueError(f"exact permanent refused for n={n} > {MAX_EXACT_N}")
    if inst.has_zero_line():
        return 0
    a = csr_matrix(inst.adj)
    graph = bmat([[None, a], [a.T, None]])
    _, labels = connected_components(graph, directed=False)
    row_labels, col_labels = labels[:n], labels[n:]
    result = 1
    for comp in np.unique(labels):
        rows = np.flatnonzero(row_labels == comp)
        cols = np.flatnonzero(col_labels == comp)
        if len(rows) != len(cols):
            return 0
        block = inst.adj[np.ix_(rows, cols)]
        result *= _ryser([np.flatnonzero(block[:, j]).tolist() for j in range(len(cols))])
        if result == 0:
            return 0
    return result


def enumerate_matchings(inst: Instance, max_count: int = MAX_ENUMERATED) -> list[Matching]:
    """All perfect matchings, sorted lexicographically by ``assign``."""
    n = inst.n
    col_rows = inst.column_rows()
    used = [False] * n
    assign = []
    out = []

    def extend(j):
        if j == n:
            if len(out) >= max_count:
                raise EnumerationCapExceeded(len(out))
            out.append(Matching(assign))
            return
        for i in col_rows[j]:
            if not used[i]:
                used[i] = True
                assign.append(i)
                extend(j + 1)
                assign.pop()
                used[i] = False

    extend(0)
    return out


class ChiSquareResult(NamedTuple):
    statistic: float
    dof: int
    p_value: float


def uniformity_chisq(samples, support) -> ChiSquareResult:
    """Pearson goodness of fit of ``samples`` against uniform on ``support``."""
    support = [m.assign if isinstance(m, Matching) else tuple(m) for m in support]
    k = len(support)
    if k < 2:
        raise ValueError("support needs at least two elements")
    index = {m: idx for idx, m in enumerate(support)}
    if len(index) != k:
        raise ValueError("support has duplicate elements")
    counts = Counter(m.assign if isinstance(m, Matching) else tuple(m) for m in samples)
    stray = [m for m in counts if m not in index]
    if stray:
        raise ValueError(f"sample {stray[0]} is not in the support")
    total = sum(counts.values())
    expected = total / k
    if expected < 5:
        raise ValueError(f"expected count per cell is {expected:.2f} < 5; draw more samples")
    observed = np.array([counts.get(m, 0) for m in support], dtype=float)
    stat = float(((observed - expected) ** 2).sum() / expected)
    dof = k - 1
    return ChiSquareResult(stat, dof, float(gammaincc(dof / 2.0, stat / 2.0)))
