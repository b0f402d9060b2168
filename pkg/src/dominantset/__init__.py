"""Replicator dynamics, evolutionary equilibria and dominant-set clustering."""

__version__ = "0.1.0"

from .clustering import (Cluster, ClusteringResult, DominantSetClustering,
                         enumerate_overlapping, extract_dominant_set,
                         normalize_affinities, peel_partition)
from .dynamics import (DynamicsConfig, Trajectory, discrete_step,
                       integrate_continuous_step, is_stationary, replicator_rhs, run)
from .equilibria import (EquilibriumReport, classify, enumerate_candidates,
                         is_ess, is_nash)
from .game import expected_payoffs, mean_payoff, shift_payoffs
from .hypergraph import (AffinityTensor, HypergraphDominantSet,
                         extract_hyper_cluster, tensor_payoffs)
from .replicator import ReplicatorDynamics

__all__ = [
    "AffinityTensor", "Cluster", "ClusteringResult", "DominantSetClustering",
    "DynamicsConfig", "EquilibriumReport", "HypergraphDominantSet",
    "ReplicatorDynamics", "Trajectory", "classify", "discrete_step",
    "enumerate_candidates", "enumerate_overlapping", "expected_payoffs",
    "extract_dominant_set", "extract_hyper_cluster", "integrate_continuous_step",
    "is_ess", "is_nash", "is_stationary", "mean_payoff", "normalize_affinities",
    "peel_partition", "replicator_rhs", "run", "shift_payoffs", "tensor_payoffs",
]
