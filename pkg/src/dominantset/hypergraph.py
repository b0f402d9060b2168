"""Clustering game with more than two players on a k-uniform hypergraph.

Affinities live on unordered k-tuples of distinct objects. The payoff of
object ``i`` is the multilinear form

    payoff_i(x) = (k-1)! * sum_{e containing i} w(e) * prod_{j in e, j != i} x_j

so that an unordered edge stands for all of its k! orderings and the k = 2
case reproduces ``W @ x``. The multiplicative update
``x_i <- x_i payoff_i / x'payoff`` never decreases the mean payoff for
positive weights (Baum-Eagon inequality). This multilinear realization
follows the hypergraph-clustering literature; it is one reasonable choice.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from ._validation import SUPPORT_EPS, barycenter, check_simplex, support
from .clustering import Cluster, ClusteringResult, _echo, PEEL
from .dynamics import DISCRETE, DynamicsConfig, iterate


@dataclass(frozen=True, eq=False)
class AffinityTensor:
    """Sparse symmetric k-uniform affinity tensor.

    ``edges`` is an (m, k) int array of sorted, distinct 0-based indices and
    ``weights`` the matching positive weights.
    """

    n: int
    k: int
    edges: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))
        if self.n < 1:
            raise ValueError("tensor needs at least one object")
        if self.k < 2:
            raise ValueError("arity k must be at least 2")
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, self.k)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if len(edges) != len(weights):
            raise ValueError("edges and weights differ in length")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValueError("hyperedge weights must be finite and positive")
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise ValueError("hyperedge index out of range")
        edges = np.sort(edges, axis=1)
        if np.any(edges[:, 1:] == edges[:, :-1]):
            raise ValueError("hyperedge has a repeated index")
        # canonical order keeps the payoff summation deterministic
        order = np.lexsort(edges.T[::-1]) if len(edges) else np.zeros(0, dtype=int)
        edges, weights = edges[order], weights[order]
        if len(edges) > 1 and np.any(np.all(edges[1:] == edges[:-1], axis=1)):
            raise ValueError("duplicate hyperedge")
        edges.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_dict(cls, n, k, edge_weights):
        """Build from a mapping ``{tuple_of_indices: weight}``."""
        items = list(edge_weights.items())
        edges = np.array([e for e, _ in items], dtype=np.int64).reshape(-1, k)
        weights = np.array([w for _, w in items], dtype=np.float64)
        return cls(n, k, edges, weights)

    @classmethod
    def from_matrix(cls, W):
        """k = 2 tensor holding the upper-triangular positive entries of ``W``."""
        W = np.asarray(W, dtype=np.float64)
        i, j = np.triu_indices(W.shape[0], 1)
        keep = W[i, j] > 0
        return cls(W.shape[0], 2, np.column_stack([i[keep], j[keep]]), W[i, j][keep])

    def as_dict(self):
        return {tuple(int(v) for v in e): float(w) for e, w in zip(self.edges, self.weights)}

    def restrict(self, keep):
        """Sub-tensor on objects ``keep`` (edges leaving the set are dropped), relabeled."""
        keep = np.asarray(keep, dtype=np.int64)
        relabel = np.full(self.n, -1, dtype=np.int64)
        relabel[keep] = np.arange(len(keep))
        e = relabel[self.edges] if len(self.edges) else self.edges
        inside = np.all(e >= 0, axis=1) if len(e) else np.zeros(0, dtype=bool)
        return AffinityTensor(len(keep), self.k, e[inside], self.weights[inside])


def _payoffs(T, x):
    p = np.zeros(T.n)
    if not len(T.edges):
        return p
    X = x[T.edges]
    # product of the other k-1 coordinates, without dividing by x
    left = np.cumprod(np.column_stack([np.ones(len(X)), X[:, :-1]]), axis=1)
    right = np.cumprod(np.column_stack([np.ones(len(X)), X[:, :0:-1]]), axis=1)[:, ::-1]
    contrib = (T.weights * factorial(T.k - 1))[:, None] * left * right
    np.add.at(p, T.edges.ravel(), contrib.ravel())
    return p


def tensor_payoffs(T, x):
    """Payoff of every object against population ``x`` in the k-player game."""
    x = check_simplex(x, T.n)
    return _payoffs(T, x)


def tensor_mean_payoff(T, x):
    x = check_simplex(x, T.n)
    return float(x @ _payoffs(T, x))


def hyper_step(T, x):
    """One Baum-Eagon update ``x_i payoff_i / mean``.

    Raises
    ------
    ValueError
        If the mean payoff vanishes away from a vertex.
    """
    p = _payoffs(T, x)
    y = x * p
    s = y.sum()
    if s > 0:
        return y / s
    if np.count_nonzero(x) > 1:
        raise ValueError("dynamics stalled: disconnected tensor")
    return x


def extract_hyper_cluster(T, x0=None, cfg=None, support_eps=SUPPORT_EPS):
    """Dominant set of a k-uniform hypergraph from start ``x0`` (default barycenter).

    Cohesiveness is the mean payoff at the member weights.
    """
    cfg = cfg or DynamicsConfig()
    if cfg.mode != DISCRETE:
        raise ValueError("hypergraph extraction uses discrete dynamics")
    x0 = barycenter(T.n) if x0 is None else check_simplex(x0, T.n)
    _, states, converged, k = iterate(lambda x: hyper_step(T, x), x0, cfg)
    x = states[-1]
    members = support(x, support_eps)
    w = x[members] / x[members].sum()
    full = np.zeros(T.n)
    full[members] = w
    coh = float(full @ _payoffs(T, full))
    return Cluster(members=members, weights=w, cohesiveness=coh,
                   iterations=int(k), converged=bool(converged))


def peel_hyper_partition(T, cfg=None, min_size=1, min_cohesiveness=0.0,
                         support_eps=SUPPORT_EPS):
    """Peel-off partition of a hypergraph; objects on no remaining edge become outliers."""
    cfg = cfg or DynamicsConfig()
    remaining = np.arange(T.n)
    clusters = []
    converged = True
    while remaining.size:
        sub = T.restrict(remaining)
        if not len(sub.edges):
            break
        c = extract_hyper_cluster(sub, None, cfg, support_eps)
        converged = c.converged
        if not c.converged or len(c) < min_size or c.cohesiveness < min_cohesiveness:
            break
        c.members = remaining[c.members]
        clusters.append(c)
        remaining = np.setdiff1d(remaining, c.members)
    return ClusteringResult(
        clusters=clusters, outliers=remaining, n_objects=T.n, converged=converged,
        config=_echo(cfg, PEEL, support_eps, min_size, min_cohesiveness, arity=T.k))


class HypergraphDominantSet(ClusterMixin, BaseEstimator):
    """Peel-off dominant-set clustering of a k-uniform hypergraph.

    ``fit`` takes an :class:`AffinityTensor`; see
    :class:`~dominantset.clustering.DominantSetClustering` for the
    parameters and fitted attributes, which mean the same here.
    """

    def __init__(self, tol=1e-10, max_iter=100_000, support_eps=SUPPORT_EPS,
                 min_size=1, min_cohesiveness=0.0):
        self.tol = tol
        self.max_iter = max_iter
        self.support_eps = support_eps
        self.min_size = min_size
        self.min_cohesiveness = min_cohesiveness

    def fit(self, X, y=None):
        if not isinstance(X, AffinityTensor):
            raise TypeError("HypergraphDominantSet.fit expects an AffinityTensor")
        cfg = DynamicsConfig(tol_convergence=self.tol, max_iters=self.max_iter)
        res = peel_hyper_partition(X, cfg, self.min_size, self.min_cohesiveness,
                                   self.support_eps)
        self.result_ = res
        self.clusters_ = res.clusters
        self.labels_ = np.full(X.n, -1, dtype=int)
        for k, c in enumerate(res.clusters):
            self.labels_[c.members] = k
        return self
