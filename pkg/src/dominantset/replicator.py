"""Estimator wrapper around a single replicator-dynamics run."""

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import barycenter, check_payoff_matrix, check_simplex
from .dynamics import DISCRETE, DynamicsConfig, run
from .equilibria import DEFAULT_TOL, classify


class ReplicatorDynamics(BaseEstimator):
    """Evolve a population on a symmetric game and classify where it ends up.

    Parameters
    ----------
    mode : {'discrete', 'continuous'}, default='discrete'
    x0 : array-like of shape (n,), optional
        Start point; the barycenter when omitted.
    dt : float, default=0.01
        RK4 step in continuous mode.
    tol : float, default=1e-10
    max_iter : int, default=100000
    record_every : int, default=1
    classify_tol : float, default=1e-8
        Tolerance of the stationary / Nash / ESS tests on the final state.

    Attributes
    ----------
    trajectory_ : Trajectory
    x_ : ndarray of shape (n,)
        Final state.
    report_ : EquilibriumReport
    """

    def __init__(self, mode=DISCRETE, x0=None, dt=0.01, tol=1e-10, max_iter=100_000,
                 record_every=1, classify_tol=DEFAULT_TOL):
        self.mode = mode
        self.x0 = x0
        self.dt = dt
        self.tol = tol
        self.max_iter = max_iter
        self.record_every = record_every
        self.classify_tol = classify_tol

    def fit(self, A, y=None):
        A = check_payoff_matrix(A)
        n = A.shape[0]
        x0 = barycenter(n) if self.x0 is None else check_simplex(self.x0, n)
        cfg = DynamicsConfig(mode=self.mode, dt=self.dt, tol_convergence=self.tol,
                             max_iters=self.max_iter, record_every=self.record_every)
        self.trajectory_ = run(A, x0, cfg)
        self.x_ = np.array(self.trajectory_.final)
        self.report_ = classify(A, self.x_, self.classify_tol)
        self.n_features_in_ = n
        return self
