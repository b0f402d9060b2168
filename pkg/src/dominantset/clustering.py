"""Dominant-set clustering.

Objects are the pure strategies of a symmetric game whose payoffs are the
pairwise affinities. A cluster is the support of a stable state of the
discrete replicator dynamics, and its cohesiveness is ``x'Wx`` at the
converged weights. Clusters are found one at a time (peel-off) or from
several biased starts on the full matrix (overlapping).
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.metrics.pairwise import pairwise_kernels
from sklearn.utils.validation import check_is_fitted

from ._validation import SUPPORT_EPS, barycenter, check_payoff_matrix, check_simplex, support
from .dynamics import DISCRETE, DynamicsConfig, iterate
from .equilibria import invasion_direction

PEEL = "peel"
OVERLAP = "overlap"

#: Attempts to leave an unstable stationary point before giving up.
MAX_ESCAPES = 20
ESCAPE_TOL = 1e-6


@dataclass(eq=False)
class Cluster:
    members: np.ndarray
    weights: np.ndarray
    cohesiveness: float
    iterations: int = 0
    converged: bool = True

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        if not isinstance(other, Cluster):
            return NotImplemented
        return (np.array_equal(self.members, other.members)
                and np.array_equal(self.weights, other.weights)
                and self.cohesiveness == other.cohesiveness
                and self.iterations == other.iterations
                and self.converged == other.converged)


@dataclass(eq=False)
class ClusteringResult:
    clusters: list
    outliers: np.ndarray
    n_objects: int
    shift_applied: float = 0.0
    config: dict = field(default_factory=dict)
    converged: bool = True

    def __eq__(self, other):
        if not isinstance(other, ClusteringResult):
            return NotImplemented
        return (self.clusters == other.clusters
                and np.array_equal(self.outliers, other.outliers)
                and self.n_objects == other.n_objects
                and self.shift_applied == other.shift_applied
                and self.config == other.config
                and self.converged == other.converged)


def normalize_affinities(W_raw):
    """Zero the diagonal and lift negative off-diagonal affinities.

    If the smallest off-diagonal entry ``m`` is negative, ``-m`` is added to
    every off-diagonal entry; the diagonal stays zero. Asymmetry is kept.

    Returns
    -------
    W : ndarray of shape (n, n)
    shift : float
        The constant added off the diagonal (0 when none was needed).
    """
    W = check_payoff_matrix(W_raw, name="affinity matrix").copy()
    np.fill_diagonal(W, 0.0)
    n = W.shape[0]
    shift = 0.0
    if n > 1:
        off = ~np.eye(n, dtype=bool)
        m = W[off].min()
        if m < 0:
            shift = -float(m)
            W[off] += shift
    return W, shift


def _escape(W, x, tol):
    d = invasion_direction(W, x, tol)
    if d is None:
        return None
    best, step = None, 0.0
    for sign in (1.0, -1.0):
        s = sign * d
        neg = s < 0
        reach = np.min(x[neg] / -s[neg]) if neg.any() else np.inf
        reach = min(reach, 1.0)
        if reach > step:
            best, step = s, reach
    if best is None or step <= 1e-12:
        return None
    y = np.clip(x + 0.5 * step * best, 0.0, None)
    return y / y.sum()


def _dominant_state(W, x0, cfg):
    """Discrete replicator dynamics on a nonnegative zero-diagonal matrix.

    A state with zero mean payoff earns zero on its whole support, so it is
    stationary and left as is. Unstable stationary states (saddles reached
    from symmetric starts) are left along an ascent direction and the
    dynamics restarted. Returns the final state, total iterations, the
    convergence flag and the recorded ``(times, states)``.
    """
    def step(x):
        p = W @ x
        y = x * p
        s = y.sum()
        return y / s if s > 0 else x

    x, total, offset, converged = x0, 0, 0.0, False
    times, states = [], []
    for _ in range(MAX_ESCAPES + 1):
        t, st, converged, k = iterate(step, x, cfg)
        times.append(t + offset)
        states.append(st)
        x, total = st[-1], total + k
        # the escape jump takes one time unit
        offset += t[-1] + 1.0
        if not converged:
            break
        y = _escape(W, x, ESCAPE_TOL)
        if y is None:
            break
        x = y
    return x, total, converged, np.concatenate(times), np.vstack(states)


def _make_cluster(W, x, eps, iterations, converged):
    members = support(x, eps)
    w = x[members] / x[members].sum()
    coh = float(w @ W[np.ix_(members, members)] @ w)
    return Cluster(members=members, weights=w, cohesiveness=coh,
                   iterations=int(iterations), converged=bool(converged))


def _check_cfg(cfg):
    cfg = cfg or DynamicsConfig()
    if cfg.mode != DISCRETE:
        raise ValueError("dominant-set extraction uses discrete dynamics")
    return cfg


def extract_dominant_set(W, x0=None, cfg=None, support_eps=SUPPORT_EPS):
    """Extract one dominant set from the affinity matrix ``W``.

    The matrix is normalized with :func:`normalize_affinities` before the
    dynamics run; cohesiveness is measured on ``W`` with its diagonal zeroed
    but without the off-diagonal shift. ``x0`` defaults to the barycenter.
    """
    cfg = _check_cfg(cfg)
    W0 = check_payoff_matrix(W, name="affinity matrix").copy()
    np.fill_diagonal(W0, 0.0)
    Wn, _ = normalize_affinities(W0)
    n = Wn.shape[0]
    x0 = barycenter(n) if x0 is None else check_simplex(x0, n)
    x, iters, converged, _, _ = _dominant_state(Wn, x0, cfg)
    return _make_cluster(W0, x, support_eps, iters, converged)


def _passes(cluster, min_size, min_cohesiveness):
    return len(cluster) >= min_size and cluster.cohesiveness >= min_cohesiveness


def peel_partition(W, cfg=None, min_size=1, min_cohesiveness=0.0,
                   support_eps=SUPPORT_EPS, trace=None):
    """Partition objects by repeatedly extracting and removing a dominant set.

    Extraction stops when no objects remain, when a cluster fails the
    ``min_size`` / ``min_cohesiveness`` filters, or when the dynamics does
    not converge; whatever is left becomes outliers. Member indices refer to
    the original matrix.

    If ``trace`` is a list, one ``(indices, times, states)`` triple per
    extraction is appended to it, recorded as ``cfg.record_every`` asks.
    """
    if min_size < 1:
        raise ValueError("min_size must be at least 1")
    if min_cohesiveness < 0:
        raise ValueError("min_cohesiveness must be nonnegative")
    cfg = _check_cfg(cfg)
    W0 = check_payoff_matrix(W, name="affinity matrix").copy()
    np.fill_diagonal(W0, 0.0)
    Wn, shift = normalize_affinities(W0)
    remaining = np.arange(W0.shape[0])
    clusters = []
    all_converged = True
    while remaining.size:
        sub = np.ix_(remaining, remaining)
        x, iters, converged, t, st = _dominant_state(Wn[sub], barycenter(remaining.size), cfg)
        if trace is not None:
            trace.append((remaining, t, st))
        c = _make_cluster(W0[sub], x, support_eps, iters, converged)
        all_converged = converged
        if not converged or not _passes(c, min_size, min_cohesiveness):
            break
        c.members = remaining[c.members]
        clusters.append(c)
        remaining = np.setdiff1d(remaining, c.members)
    return ClusteringResult(
        clusters=clusters, outliers=remaining, n_objects=W0.shape[0],
        shift_applied=shift, converged=all_converged,
        config=_echo(cfg, PEEL, support_eps, min_size, min_cohesiveness))


def biased_start(n, i, bias=0.9):
    """Start point ``bias * e_i + (1 - bias) * barycenter``."""
    x = np.full(n, (1.0 - bias) / n)
    x[i] += bias
    return x


def enumerate_overlapping(W, cfg=None, restarts=None, min_size=1,
                          min_cohesiveness=0.0, support_eps=SUPPORT_EPS, trace=None):
    """Find possibly overlapping dominant sets from vertex-biased starts.

    Start ``i`` is ``0.9 e_i + 0.1 * barycenter``; ``restarts`` (default
    ``n``) limits how many vertices are used, in index order. Clusters are
    deduplicated by member set, filtered, and sorted by decreasing
    cohesiveness (ties by member list). Objects in no cluster are outliers.
    ``trace`` works as in :func:`peel_partition`, one entry per start.
    """
    cfg = _check_cfg(cfg)
    W0 = check_payoff_matrix(W, name="affinity matrix").copy()
    np.fill_diagonal(W0, 0.0)
    Wn, shift = normalize_affinities(W0)
    n = W0.shape[0]
    restarts = n if restarts is None else int(restarts)
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    found = {}
    all_converged = True
    for i in range(min(restarts, n)):
        x, iters, converged, t, st = _dominant_state(Wn, biased_start(n, i), cfg)
        if trace is not None:
            trace.append((np.arange(n), t, st))
        c = _make_cluster(W0, x, support_eps, iters, converged)
        all_converged = all_converged and converged
        key = tuple(c.members.tolist())
        if key not in found and _passes(c, min_size, min_cohesiveness):
            found[key] = c
    clusters = sorted(found.values(),
                      key=lambda c: (-c.cohesiveness, c.members.tolist()))
    covered = set()
    for c in clusters:
        covered.update(c.members.tolist())
    outliers = np.array([i for i in range(n) if i not in covered], dtype=int)
    return ClusteringResult(
        clusters=clusters, outliers=outliers, n_objects=n, shift_applied=shift,
        converged=all_converged, config=_echo(cfg, OVERLAP, support_eps, min_size, min_cohesiveness,
                     restarts=restarts))


def _echo(cfg, mode, support_eps, min_size, min_cohesiveness, **extra):
    out = {
        "mode": mode,
        "tol_convergence": float(cfg.tol_convergence),
        "max_iters": int(cfg.max_iters),
        "support_eps": float(support_eps),
        "min_size": int(min_size),
        "min_cohesiveness": float(min_cohesiveness),
    }
    out.update(extra)
    return out


class DominantSetClustering(ClusterMixin, BaseEstimator):
    """Dominant-set clustering estimator.

    Parameters
    ----------
    mode : {'peel', 'overlap'}, default='peel'
        ``'peel'`` gives a hard partition plus outliers; ``'overlap'`` runs
        one vertex-biased start per object on the full matrix.
    affinity : str, default='precomputed'
        ``'precomputed'`` treats ``X`` as an (n, n) affinity matrix. Any
        other value is passed as ``metric`` to
        :func:`sklearn.metrics.pairwise.pairwise_kernels` on feature rows.
    gamma : float, optional
        Kernel coefficient forwarded to ``pairwise_kernels``.
    tol : float, default=1e-10
        Convergence threshold on the per-step state change.
    max_iter : int, default=100000
    support_eps : float, default=1e-4
        Object ``i`` is a member when ``x_i > support_eps / n``.
    min_size : int, default=1
    min_cohesiveness : float, default=0.0
    restarts : int, optional
        Number of biased starts in overlap mode (default ``n``).

    Attributes
    ----------
    result_ : ClusteringResult
    clusters_ : list of Cluster
    labels_ : ndarray of shape (n,)
        Index of the first cluster containing each object (clusters are in
        extraction order for peel, cohesiveness order for overlap), -1 for
        outliers.
    membership_ : ndarray of shape (n, n_clusters)
        Characteristic weight of each object in each cluster.
    affinity_matrix_ : ndarray of shape (n, n)
    """

    def __init__(self, mode=PEEL, affinity="precomputed", gamma=None, tol=1e-10,
                 max_iter=100_000, support_eps=SUPPORT_EPS, min_size=1,
                 min_cohesiveness=0.0, restarts=None):
        self.mode = mode
        self.affinity = affinity
        self.gamma = gamma
        self.tol = tol
        self.max_iter = max_iter
        self.support_eps = support_eps
        self.min_size = min_size
        self.min_cohesiveness = min_cohesiveness
        self.restarts = restarts

    def _affinity(self, X):
        if self.affinity == "precomputed":
            return check_payoff_matrix(X, name="affinity matrix")
        params = {} if self.gamma is None else {"gamma": self.gamma}
        return pairwise_kernels(X, metric=self.affinity, filter_params=True, **params)

    def fit(self, X, y=None):
        W = self._affinity(X)
        cfg = DynamicsConfig(tol_convergence=self.tol, max_iters=self.max_iter)
        if self.mode == PEEL:
            res = peel_partition(W, cfg, self.min_size, self.min_cohesiveness,
                                 self.support_eps)
        elif self.mode == OVERLAP:
            res = enumerate_overlapping(W, cfg, self.restarts, self.min_size,
                                        self.min_cohesiveness, self.support_eps)
        else:
            raise ValueError(f"mode must be 'peel' or 'overlap', got {self.mode!r}")
        n = W.shape[0]
        self.affinity_matrix_ = W
        self.result_ = res
        self.clusters_ = res.clusters
        self.labels_ = np.full(n, -1, dtype=int)
        self.membership_ = np.zeros((n, len(res.clusters)))
        for k, c in reversed(list(enumerate(res.clusters))):
            self.labels_[c.members] = k
            self.membership_[c.members, k] = c.weights
        return self

    @property
    def outliers_(self):
        check_is_fitted(self, "result_")
        return self.result_.outliers
