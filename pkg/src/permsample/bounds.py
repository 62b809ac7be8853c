"""Upper and lower bounds on the permanent of a 0-1 matrix.

Every bound is kept as a natural logarithm. The recursive factor table
``g`` drives the sampling bound: ``g(1) = e`` and

    g(a + 1) = g(a) + 1 + 1 / (2 g(a)) + 0.6 / g(a)**2,

and the bound itself is the product of ``g(r_i) / e`` over the row sums.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .instance import Instance

NEG_INF = float("-inf")


class BoundKind(str, enum.Enum):
    BREGMAN = "bregman"
    HUBER = "huber"
    VDW_REGULAR = "vdw_regular"
    VDW_NEARLY_REGULAR = "vdw_nearly_regular"


@dataclass(frozen=True)
class LogBound:
    log_value: float
    kind: BoundKind

    @property
    def value(self) -> float:
        """Linear value; overflows to ``inf`` for very large bounds."""
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_value))


@dataclass(frozen=True, eq=False)
class GFactorTable:
    """Read-only table of g(1..a_max).

    Arrays are indexed directly by ``a``. Slot 0 holds ``g = 0`` and
    ``log_g_over_e = -inf`` so that a row emptied by a reduction makes the
    product vanish instead of needing a special case.
    """

    a_max: int
    g: np.ndarray
    log_g_over_e: np.ndarray

    def factor(self, a: int) -> float:
        return float(self.g[a] / math.e)

    @cached_property
    def log_list(self) -> list[float]:
        return self.log_g_over_e.tolist()


def build_g_table(a_max: int) -> GFactorTable:
    if not isinstance(a_max, (int, np.integer)) or a_max < 1:
        raise ValueError(f"a_max must be a positive integer, got {a_max!r}")
    a_max = int(a_max)
    g = np.empty(a_max + 1)
    g[0] = 0.0
    x = math.e
    g[1] = x
    for a in range(1, a_max):
        x = x + 1.0 + 1.0 / (2.0 * x) + 0.6 / (x * x)
        g[a + 1] = x
    with np.errstate(divide="ignore"):
        lg = np.log(g) - 1.0
    lg[1] = 0.0
    g.setflags(write=False)
    lg.setflags(write=False)
    return GFactorTable(a_max, g, lg)


@lru_cache(maxsize=None)
def _cached_table(a_max: int) -> GFactorTable:
    return build_g_table(a_max)


def shared_g_table(a_max: int) -> GFactorTable:
    """Process-wide table; sizes are rounded up to limit rebuilds."""
    size = 16
    while size < a_max:
        size *= 2
    return _cached_table(size)


@lru_cache(maxsize=None)
def _log_factorials(m: int) -> np.ndarray:
    out = np.zeros(m + 1)
    if m:
        out[1:] = np.cumsum(np.log(np.arange(1, m + 1, dtype=float)))
    out.setflags(write=False)
    return out


def log_factorial(k: int) -> float:
    size = 64
    while size < k:
        size *= 2
    return float(_log_factorials(size)[k])


def bregman_bound(inst: Instance) -> LogBound:
    """Product over rows of (r!)**(1/r)."""
    r = inst.row_sums
    if (r == 0).any():
        return LogBound(NEG_INF, BoundKind.BREGMAN)
    lf = _log_factorials(int(r.max()))
    return LogBound(float(np.sum(lf[r] / r)), BoundKind.BREGMAN)


def huber_bound(inst: Instance, table: GFactorTable | None = None) -> LogBound:
    """Product over rows of g(r) / e; this is the bound the sampler draws against."""
    r = inst.row_sums
    if table is None:
        table = shared_g_table(inst.n)
    if int(r.max()) > table.a_max:
        raise ValueError(f"row sum {int(r.max())} exceeds table size {table.a_max}")
    if (r == 0).any():
        return LogBound(NEG_INF, BoundKind.HUBER)
    return LogBound(float(np.sum(table.log_g_over_e[r])), BoundKind.HUBER)


def vdw_lower_bound_regular(n: int, degree: int) -> LogBound:
    """Stirling form (degree/e)**n * sqrt(2 pi n) of the doubly stochastic bound."""
    if n < 1 or not 1 <= degree <= n:
        raise ValueError(f"need 1 <= degree <= n, got n={n}, degree={degree}")
    value = n * (math.log(degree) - 1.0) + 0.5 * math.log(2.0 * math.pi * n)
    return LogBound(value, BoundKind.VDW_REGULAR)


def vdw_lower_bound_nearly_regular(inst: Instance) -> LogBound:
    """Lower bound (n!/n**n) * prod(r_i) * prod_{c_j < 1} c_j.

    Rows are scaled to sum to one; ``c_j`` are the resulting column sums.
    Instances without a perfect matching get ``-inf`` since the bound only
    holds when the permanent is positive.
    """
    n = inst.n
    r = inst.row_sums
    if not inst.has_perfect_matching():
        return LogBound(NEG_INF, BoundKind.VDW_NEARLY_REGULAR)
    c = (inst.adj / r[:, None]).sum(axis=0)
    deficit = c[c < 1.0]
    value = log_factorial(n) - n * math.log(n) + float(np.log(r).sum()) + float(np.log(deficit).sum())
    return LogBound(value, BoundKind.VDW_NEARLY_REGULAR)


@dataclass(frozen=True)
class RuntimePrediction:
    log_acceptance_lower: float
    expected_trials_upper: float
    delta_min: int
    gamma: float


def predict_runtime(inst: Instance, table: GFactorTable | None = None) -> RuntimePrediction:
    """Bound the per-pass acceptance probability per(A)/M(A) from below."""
    delta_min = inst.min_degree
    if delta_min < 1:
        raise ValueError("runtime prediction needs every row and column sum >= 1")
    upper = huber_bound(inst, table).log_value
    lower = vdw_lower_bound_nearly_regular(inst).log_value
    log_acc = min(0.0, lower - upper)
    with np.errstate(over="ignore"):
        trials = float(np.exp(-log_acc))
    return RuntimePrediction(log_acc, trials, delta_min, delta_min / inst.n)


def closed_form_log_trials(n: int, degree: int) -> float:
    """Log of (5.3 sqrt(degree))**(n/degree) / sqrt(2 pi n) for regular graphs.

    Follows from g(a) <= a + 0.5 ln a + 1.65 and 1 + x <= exp(x), using
    exp(1.65) < 5.3. Grows like n**(0.5 + 0.5/gamma) when degree = gamma n.
    """
    if not 1 <= degree <= n:
        raise ValueError(f"need 1 <= degree <= n, got n={n}, degree={degree}")
    return (n / degree) * math.log(5.3 * math.sqrt(degree)) - 0.5 * math.log(2.0 * math.pi * n)


def g_envelope(a) -> np.ndarray:
    """Upper envelope a + 0.5 ln a + 1.65, valid for a >= 2."""
    a = np.asarray(a, dtype=float)
    return a + 0.5 * np.log(a) + 1.65
