"""Permanent estimates from the sampler's acceptance rate.

Each pass accepts with probability exactly per(A) / M(A), so
``accepts / trials * M(A)`` estimates the permanent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from decimal import Context, Decimal

from .bounds import GFactorTable, huber_bound, shared_g_table
from .instance import Instance, check_feasible
from .streams import PassStream

TARGET_ACCEPTS = "target-accepts"
FIXED_TRIALS = "fixed-trials"
MODES = (TARGET_ACCEPTS, FIXED_TRIALS)


@dataclass(frozen=True)
class AccuracyParams:
    sigma: float = 0.1
    delta: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.sigma < 1.0:
            raise ValueError(f"sigma must lie in (0, 1), got {self.sigma}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class TrialLedger:
    trials: int
    accepts: int
    log_m_tilde: float
    log_estimate: float
    sigma: float
    delta: float
    seed: int
    mode: str = TARGET_ACCEPTS

    @property
    def acceptance_rate(self) -> float:
        return self.accepts / self.trials if self.trials else 0.0

    @property
    def estimate(self) -> float:
        try:
            return math.exp(self.log_estimate)
        except OverflowError:
            return math.inf

    @property
    def estimate_decimal(self) -> str:
        return format_log_value(self.log_estimate)


def format_log_value(log_value: float, digits: int = 12) -> str:
    """Decimal rendering of exp(log_value) that never overflows."""
    if log_value == -math.inf:
        return "0"
    if math.isnan(log_value) or log_value == math.inf:
        return "inf"
    ctx = Context(prec=digits + 4)
    value = ctx.exp(Decimal(log_value))
    text = f"{ctx.plus(value):.{digits}g}"
    mantissa, sep, exponent = text.partition("e")
    if "." in mantissa:
        mantissa = mantissa.rstrip("0").rstrip(".")
    return mantissa + sep + exponent


def chernoff_target_accepts(params: AccuracyParams) -> int:
    """Accepted passes needed so that 2 exp(-sigma^2 k / 3) <= delta."""
    return math.ceil(3.0 * math.log(2.0 / params.delta) / params.sigma**2)


def estimate_permanent(
    inst: Instance,
    params: AccuracyParams | None = None,
    table: GFactorTable | None = None,
    seed=None,
    mode: str = TARGET_ACCEPTS,
    trials: int | None = None,
    workers: int = 1,
) -> TrialLedger:
    """Run passes until the stopping rule fires and scale the acceptance rate.

    ``target-accepts`` stops at the pass that brings the accept count to
    :func:`chernoff_target_accepts`. ``fixed-trials`` runs exactly ``trials``
    passes and is unbiased; with no accepts it warns and reports zero.
    """
    if params is None:
        params = AccuracyParams()
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == FIXED_TRIALS and (trials is None or trials < 1):
        raise ValueError("fixed-trials mode needs trials >= 1")
    check_feasible(inst)
    if table is None:
        table = shared_g_table(inst.n)
    log_m = huber_bound(inst, table).log_value
    target = chernoff_target_accepts(params)

    n_trials = n_accepts = 0
    with PassStream(inst, table, seed=seed, workers=workers) as stream:
        for result in stream:
            n_trials += 1
            n_accepts += result.matching is not None
            if mode == TARGET_ACCEPTS and n_accepts >= target:
                break
            if mode == FIXED_TRIALS and n_trials >= trials:
                break
        seed = stream.seed

    if n_accepts == 0:
        warnings.warn(f"no accepted pass in {n_trials} trials; estimate is 0", RuntimeWarning, stacklevel=2)
        log_est = -math.inf
    else:
        log_est = math.log(n_accepts) - math.log(n_trials) + log_m
    return TrialLedger(n_trials, n_accepts, log_m, log_est, params.sigma, params.delta, seed, mode)
