"""Signed network formation game on complete graphs: pairs of agents flip
their shared sign to reduce cognitive dissonance, driving the network
towards clustering balance."""
from .dynamics import EdgeSelector, TrajectoryOutcome, best_response, influence_update, run, step
from .game import EdgeStats, Variant, dissonance, edge_stats, is_efficient, is_nash, social_welfare, utility
from .network import (
    NetworkError,
    Partition,
    SignedNetwork,
    TriadClass,
    classify_triad,
    clustering_partition,
    deserialize,
    is_structurally_balanced,
    new_complete,
    serialize,
)

__all__ = [
    "EdgeSelector", "TrajectoryOutcome", "best_response", "influence_update", "run", "step",
    "EdgeStats", "Variant", "dissonance", "edge_stats", "is_efficient", "is_nash",
    "social_welfare", "utility", "NetworkError", "Partition", "SignedNetwork", "TriadClass",
    "classify_triad", "clustering_partition", "deserialize", "is_structurally_balanced",
    "new_complete", "serialize",
]
