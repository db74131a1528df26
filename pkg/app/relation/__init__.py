"""
Relation model construction.

Builds the vote matrix and the three families of relation models over it:
space-based (PCA + k-means clustering), graph-based (co-vote similarity) and
aggregate (per-group approval counts).
"""
from app.relation.votes import build_vote_matrix, parse_vote_value
from app.relation.space import pca_project, reconstruction_error
from app.relation.clustering import cluster_people, silhouette_of
from app.relation.graph import agreement_weights, vote_similarity_graph
from app.relation.aggregate import aggregate

__all__ = [
    "build_vote_matrix",
    "parse_vote_value",
    "pca_project",
    "reconstruction_error",
    "cluster_people",
    "silhouette_of",
    "agreement_weights",
    "vote_similarity_graph",
    "aggregate",
]
