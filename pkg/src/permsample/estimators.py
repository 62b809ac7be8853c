"""scikit-learn style front ends for the sampler and the permanent estimator."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .bounds import bregman_bound, huber_bound, predict_runtime, shared_g_table, vdw_lower_bound_nearly_regular
from .estimator import AccuracyParams, estimate_permanent
from .instance import Instance, check_adjacency, check_feasible
from .sampler import sample_many
from .streams import resolve_seed


def check_instance(X) -> Instance:
    """Validate ``X`` as a square 0-1 adjacency matrix with a perfect matching."""
    X = check_array(X, dtype=None, ensure_2d=True, ensure_min_samples=1, ensure_min_features=1)
    inst = Instance(check_adjacency(X))
    check_feasible(inst)
    return inst


class PerfectMatchingSampler(BaseEstimator):
    """Draw exactly uniform perfect matchings of a bipartite graph.

    Parameters
    ----------
    max_trials : int or None
        Pass budget per sample; ``None`` means unlimited.
    random_state : int or None
        Seed of the pass stream. ``None`` draws one at fit time and keeps it
        in ``seed_``.
    n_jobs : int
        Worker processes. Output does not depend on this value.

    Attributes
    ----------
    instance_ : Instance
    log_upper_bound_ : float
        Log of the bound the sampler draws against.
    log_bregman_bound_ : float
    log_lower_bound_ : float
    runtime_prediction_ : RuntimePrediction
    """

    def __init__(self, max_trials=None, random_state=None, n_jobs=1):
        self.max_trials = max_trials
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        inst = check_instance(X)
        self.instance_ = inst
        self.n_features_in_ = inst.n
        self.g_table_ = shared_g_table(inst.n)
        self.log_upper_bound_ = huber_bound(inst, self.g_table_).log_value
        self.log_bregman_bound_ = bregman_bound(inst).log_value
        self.log_lower_bound_ = vdw_lower_bound_nearly_regular(inst).log_value
        self.runtime_prediction_ = predict_runtime(inst, self.g_table_)
        self.seed_ = resolve_seed(self.random_state)
        return self

    def sample(self, n_samples=1):
        """Return an ``(n_samples, n)`` array; row ``s`` column ``j`` is the row matched to ``j``."""
        check_is_fitted(self, "instance_")
        reports = sample_many(
            self.instance_,
            n_samples,
            table=self.g_table_,
            seed=self.seed_,
            max_trials=self.max_trials,
            workers=self.n_jobs,
        )
        self.reports_ = reports
        self.trials_ = np.array([r.trials for r in reports])
        return np.array([r.matching.assign for r in reports], dtype=np.intp).reshape(n_samples, self.instance_.n)


class PermanentEstimator(BaseEstimator):
    """Estimate the permanent of a 0-1 matrix from the sampler's acceptance rate.

    With ``mode="target-accepts"`` the run stops once enough passes have been
    accepted for the estimate to be within a factor ``1 + sigma`` with
    probability at least ``1 - delta``. ``mode="fixed-trials"`` runs exactly
    ``n_trials`` passes and gives an unbiased estimate.
    """

    def __init__(self, sigma=0.1, delta=0.05, mode="target-accepts", n_trials=None, random_state=None, n_jobs=1):
        self.sigma = sigma
        self.delta = delta
        self.mode = mode
        self.n_trials = n_trials
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        inst = check_instance(X)
        ledger = estimate_permanent(
            inst,
            AccuracyParams(self.sigma, self.delta),
            seed=self.random_state,
            mode=self.mode,
            trials=self.n_trials,
            workers=self.n_jobs,
        )
        self.n_features_in_ = inst.n
        self.ledger_ = ledger
        self.log_permanent_ = ledger.log_estimate
        self.permanent_ = ledger.estimate
        self.n_trials_ = ledger.trials
        self.n_accepts_ = ledger.accepts
        return self
