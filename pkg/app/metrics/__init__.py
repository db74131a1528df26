"""
Relation metrics (snapshots of a relation model) and bridging metrics
(their changes over a window).
"""
from app.metrics.graph import balance_fraction, ei_index, modularity, triangles
from app.metrics.controversy import (
    exact_random_walk_controversy,
    pairwise_random_walk_controversy,
    random_walk_controversy,
    transition_matrix,
)
from app.metrics.prevalence import MOTIFS, interactions_from_votes, signal_prevalence
from app.metrics.bridging import bridging_delta, relation_report

__all__ = [
    "modularity",
    "ei_index",
    "balance_fraction",
    "triangles",
    "random_walk_controversy",
    "exact_random_walk_controversy",
    "pairwise_random_walk_controversy",
    "transition_matrix",
    "MOTIFS",
    "signal_prevalence",
    "interactions_from_votes",
    "bridging_delta",
    "relation_report",
]
