"""
Bridging signals: per-item predicted impacts fed to the value model.
"""
from app.signals.approval import (
    approval_breadth,
    consensus_from_counts,
    diverse_approval,
    group_aware_consensus,
    group_counts,
)
from app.signals.factorization import fit_matrix_factorization, mf_bridging_score
from app.signals.distribution import bimodality, exposure_diversity, is_polarized, item_bimodality
from app.signals.credibility import credibility_scores, endorsement_matrix
from app.signals.table import compute_signals

__all__ = [
    "diverse_approval",
    "approval_breadth",
    "group_aware_consensus",
    "consensus_from_counts",
    "group_counts",
    "fit_matrix_factorization",
    "mf_bridging_score",
    "bimodality",
    "is_polarized",
    "item_bimodality",
    "exposure_diversity",
    "credibility_scores",
    "endorsement_matrix",
    "compute_signals",
]
