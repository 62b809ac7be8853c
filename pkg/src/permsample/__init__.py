"""Exact uniform sampling of perfect matchings and 0-1 permanent estimation."""

__version__ = "0.1.0"

from .bounds import (
    BoundKind,
    GFactorTable,
    LogBound,
    RuntimePrediction,
    bregman_bound,
    build_g_table,
    huber_bound,
    predict_runtime,
    shared_g_table,
    vdw_lower_bound_nearly_regular,
    vdw_lower_bound_regular,
)
from .estimator import AccuracyParams, TrialLedger, chernoff_target_accepts, estimate_permanent
from .estimators import PerfectMatchingSampler, PermanentEstimator, check_instance
from .gen import GenSpec, generate
from .instance import InfeasibleInstanceError, Instance, MatrixFormatError, parse_matrix, read_matrix, write_matrix
from .oracle import enumerate_matchings, exact_permanent, uniformity_chisq
from .sampler import (
    BudgetExhausted,
    Matching,
    SampleReport,
    column_distribution,
    reduce,
    sample,
    sample_many,
    try_sample_once,
)

__all__ = [
    "AccuracyParams",
    "BoundKind",
    "BudgetExhausted",
    "GFactorTable",
    "GenSpec",
    "InfeasibleInstanceError",
    "Instance",
    "LogBound",
    "Matching",
    "MatrixFormatError",
    "PerfectMatchingSampler",
    "PermanentEstimator",
    "RuntimePrediction",
    "SampleReport",
    "TrialLedger",
    "bregman_bound",
    "build_g_table",
    "check_instance",
    "chernoff_target_accepts",
    "column_distribution",
    "enumerate_matchings",
    "estimate_permanent",
    "exact_permanent",
    "generate",
    "huber_bound",
    "parse_matrix",
    "predict_runtime",
    "read_matrix",
    "reduce",
    "sample",
    "sample_many",
    "shared_g_table",
    "try_sample_once",
    "uniformity_chisq",
    "vdw_lower_bound_nearly_regular",
    "vdw_lower_bound_regular",
    "write_matrix",
]
