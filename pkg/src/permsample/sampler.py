"""Exactly uniform perfect matchings by acceptance/rejection.

A pass walks the columns left to right. At column ``j`` it commits row
``i`` with probability M(f(A, i, j)) / M(A), where ``M`` is the product of
``g(r)/e`` over row sums and ``f`` zeroes row ``i`` and column ``j`` except
the entry ``(i, j)``. The leftover mass rejects the pass. The ratios
telescope, so every perfect matching is reached with probability exactly
``1 / M(A)`` and an accepted pass is uniform over all perfect matchings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .bounds import GFactorTable, shared_g_table
from .instance import Instance, check_feasible

# Slack allowed on the column probability sum before it counts as a bound violation.
SUM_TOLERANCE = 1e-9


class BoundViolationError(RuntimeError):
    """Column probabilities summed above one; the sampler would be biased."""


class BudgetExhausted(RuntimeError):
    def __init__(self, trials, reports=()):
        self.trials = trials
        self.reports = list(reports)
        super().__init__(f"no acceptance within {trials} trials")


@dataclass(frozen=True)
class Matching:
    """``assign[j]`` is the row matched to column ``j`` (0-based)."""

    assign: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assign", tuple(int(i) for i in self.assign))

    @property
    def n(self) -> int:
        return len(self.assign)

    def is_perfect_matching_of(self, inst: Instance) -> bool:
        if self.n != inst.n or sorted(self.assign) != list(range(self.n)):
            return False
        return all(inst.adj[i, j] == 1 for j, i in enumerate(self.assign))

    def to_line(self) -> str:
        """1-based row indices, position j holding the row for column j."""
        return " ".join(str(i + 1) for i in self.assign)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.assign, dtype=np.intp)


def reduce(inst: Instance, i: int, j: int) -> Instance:
    """Commit row ``i`` to column ``j``: both lines zeroed except entry (i, j)."""
    if inst.adj[i, j] != 1:
        raise ValueError(f"entry ({i}, {j}) is not an edge")
    a = inst.adj.copy()
    a[i, :] = 0
    a[:, j] = 0
    a[i, j] = 1
    return Instance(a)


@dataclass
class SamplerState:
    """Mid-pass view of the working matrix.

    The working matrix is never materialised during a pass. Row ``k`` that is
    still free keeps its original entries in columns ``>= next_column``; a
    committed row keeps only its chosen column. ``row_sums`` tracks the
    working matrix exactly.
    """

    inst: Instance
    col_rows: list[list[int]]
    row_sums: list[int]
    used: list[bool]
    next_column: int = 0
    partial: list[int] = field(default_factory=list)
    log_prob_path: float = 0.0

    @classmethod
    def start(cls, inst: Instance, col_rows=None) -> SamplerState:
        if col_rows is None:
            col_rows = inst.column_rows()
        return cls(inst, col_rows, inst.row_sums.tolist(), [False] * inst.n)

    @property
    def work(self) -> np.ndarray:
        n = self.inst.n
        w = np.zeros((n, n), dtype=np.int8)
        free = [k for k in range(n) if not self.used[k]]
        w[np.ix_(free, range(self.next_column, n))] = self.inst.adj[np.ix_(free, range(self.next_column, n))]
        for j, i in enumerate(self.partial):
            w[i, j] = 1
        return w

    def support(self) -> list[int]:
        used = self.used
        return [k for k in self.col_rows[self.next_column] if not used[k]]

    def should_reject(self, support) -> bool:
        """Early rejection: empty support or two rows forced into this column.

        Rows that drop to sum zero are caught in :meth:`commit`.
        """
        if not support:
            return True
        r = self.row_sums
        forced = 0
        for k in support:
            if r[k] == 1:
                forced += 1
                if forced > 1:
                    return True
        return False

    def commit(self, i: int, log_ratio: float, support) -> bool:
        """Apply f(work, i, next_column); False when some row is emptied."""
        r = self.row_sums
        ok = True
        for k in support:
            if k != i:
                r[k] -= 1
                if r[k] == 0:
                    ok = False
        r[i] = 1
        self.used[i] = True
        self.partial.append(i)
        self.next_column += 1
        self.log_prob_path += log_ratio
        return ok


def support_log_ratios(state: SamplerState, table: GFactorTable, support) -> list[float]:
    """log M(f(work, i, j)) - log M(work) for each row in ``support``.

    Shares one product over the support, so the cost is O(|support|).
    A row with sum 1 is the only one that may be chosen; any other choice
    would empty it and the reduced bound is zero.
    """
    lg = table.log_g_over_e
    r = state.row_sums
    log_p = 0.0
    forced = -1
    for k in support:
        rk = r[k]
        if rk == 1:
            forced = k
        else:
            log_p += lg[rk - 1] - lg[rk]
    if forced >= 0:
        return [log_p if k == forced else -math.inf for k in support]
    return [log_p - lg[r[k] - 1] for k in support]


def column_distribution(state: SamplerState, table: GFactorTable) -> tuple[list[float], float]:
    """Selection probabilities over all n rows for the next column, and the reject mass."""
    support = state.support()
    if not support:
        raise RuntimeError(f"column {state.next_column} has no free rows; the pass should have been rejected")
    logs = support_log_ratios(state, table, support)
    probs = [0.0] * state.inst.n
    total = 0.0
    for k, lr in zip(support, logs):
        p = math.exp(lr)
        probs[k] = p
        total += p
    if total > 1.0 + SUM_TOLERANCE:
        raise BoundViolationError(f"column {state.next_column}: probabilities sum to {total!r}")
    return probs, max(0.0, 1.0 - total)


class PassResult(NamedTuple):
    matching: Matching | None
    columns: int
    log_prob_path: float

    @property
    def accepted(self) -> bool:
        return self.matching is not None


def run_pass(inst: Instance, table: GFactorTable, rng, col_rows=None) -> PassResult:
    """One trip through the columns; ``rng`` needs a ``random()`` method.

    Same arithmetic as :func:`support_log_ratios` and :meth:`SamplerState.commit`,
    inlined because this loop dominates the running time.
    """
    if col_rows is None:
        col_rows = inst.column_rows()
    lg = table.log_list
    r = inst.row_sums.tolist()
    n = len(r)
    used = [False] * n
    assign = []
    log_path = 0.0
    exp = math.exp
    for j in range(n):
        support = [k for k in col_rows[j] if not used[k]]
        if not support:
            return PassResult(None, j, log_path)
        log_p = 0.0
        forced = -1
        for k in support:
            rk = r[k]
            if rk == 1:
                if forced >= 0:
                    return PassResult(None, j, log_path)
                forced = k
            else:
                log_p += lg[rk - 1] - lg[rk]
        u = rng.random()
        if forced >= 0:
            chosen, log_ratio = forced, log_p
            if u >= exp(log_p):
                return PassResult(None, j + 1, log_path)
        else:
            chosen = -1
            acc = 0.0
            for k in support:
                lr = log_p - lg[r[k] - 1]
                acc += exp(lr)
                if chosen < 0 and u < acc:
                    chosen, log_ratio = k, lr
            if acc > 1.0 + SUM_TOLERANCE:
                raise BoundViolationError(f"column {j}: probabilities sum to {acc!r}")
            if chosen < 0:
                return PassResult(None, j + 1, log_path)
        used[chosen] = True
        assign.append(chosen)
        log_path += log_ratio
        emptied = False
        for k in support:
            if k != chosen:
                r[k] -= 1
                if r[k] == 0:
                    emptied = True
        r[chosen] = 1
        if emptied:
            return PassResult(None, j + 1, log_path)
    return PassResult(Matching(assign), n, log_path)


def reference_pass(inst: Instance, table: GFactorTable, rng) -> PassResult:
    """Slow pass built from :class:`SamplerState` and :func:`column_distribution`."""
    state = SamplerState.start(inst)
    n = inst.n
    for j in range(n):
        support = state.support()
        if state.should_reject(support):
            return PassResult(None, j, state.log_prob_path)
        probs, _ = column_distribution(state, table)
        logs = dict(zip(support, support_log_ratios(state, table, support)))
        u = rng.random()
        acc = 0.0
        chosen = -1
        for k in support:
            acc += probs[k]
            if u < acc:
                chosen = k
                break
        if chosen < 0:
            return PassResult(None, j + 1, state.log_prob_path)
        if not state.commit(chosen, logs[chosen], support):
            return PassResult(None, j + 1, state.log_prob_path)
    return PassResult(Matching(state.partial), n, state.log_prob_path)


def try_sample_once(inst: Instance, table: GFactorTable, rng) -> Matching | None:
    """A single pass; ``None`` means the pass was rejected."""
    return run_pass(inst, table, rng).matching


@dataclass(frozen=True)
class SampleReport:
    matching: Matching
    trials: int
    columns_advanced_total: int
    seed: int


def sample(inst: Instance, table: GFactorTable | None = None, seed=None, max_trials=None, workers=1) -> SampleReport:
    """Repeat passes until one is accepted."""
    return sample_many(inst, 1, table=table, seed=seed, max_trials=max_trials, workers=workers)[0]


def sample_many(inst: Instance, count: int, table=None, seed=None, max_trials=None, workers=1) -> list[SampleReport]:
    """``count`` consecutive samples from one seeded pass stream.

    ``max_trials`` caps the passes spent on each individual sample; running
    out raises :class:`BudgetExhausted` carrying the reports finished so far.
    """
    from .streams import PassStream

    check_feasible(inst)
    if table is None:
        table = shared_g_table(inst.n)
    reports = []
    with PassStream(inst, table, seed=seed, workers=workers) as stream:
        trials = columns = 0
        for result in stream:
            trials += 1
            columns += result.columns
            if result.matching is not None:
                reports.append(SampleReport(result.matching, trials, columns, stream.seed))
                if len(reports) == count:
                    break
                trials = columns = 0
            elif max_trials is not None and trials >= max_trials:
                raise BudgetExhausted(trials, reports)
    return reports
