"""
Graph-based relation model: people linked by co-vote agreement.

Edge weight between u and v is (matching - mismatching) / co-voted, taken over
items both voted on with a non-pass vote. Pairs with no such items stay
unlinked.
"""
import logging
from typing import Tuple

import numpy as np

from app.models.diagnostics import WarningType
from app.models.relations import GraphEdge, GraphModel
from app.models.votes import VoteMatrix
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def agreement_weights(m: VoteMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pairwise agreement weights and co-vote counts in canonical person order.

    Returns (weights, co_counts); weights are NaN where co_counts is 0.
    """
    values, observed = m.to_dense()
    nonpass = (observed & (values != 0)).astype(float)
    signed = values * nonpass
    co_counts = nonpass @ nonpass.T
    agreement = signed @ signed.T
    with np.errstate(invalid="ignore", divide="ignore"):
        weights = np.where(co_counts > 0, agreement / np.where(co_counts > 0, co_counts, 1), np.nan)
    return weights, co_counts


def vote_similarity_graph(m: VoteMatrix, tau: float = 0.0, signed: bool = False) -> GraphModel:
    """
    Build the co-vote similarity graph.

    Unsigned: edge iff weight >= tau, with tau in [0, 1] so weights stay
    non-negative. Signed: edge iff |weight| >= tau and weight != 0, carrying
    sign(weight); any tau in [-1, 1] is accepted.
    """
    if not -1.0 <= tau <= 1.0:
        raise InputError(ErrorType.INVALID_CONFIG, f"Threshold tau={tau} must lie in [-1, 1]")
    if tau < 0 and not signed:
        raise InputError(
            ErrorType.INVALID_CONFIG,
            f"Threshold tau={tau} would admit negative weights; unsigned graphs need tau >= 0",
            details={"tau": tau},
        )

    people = m.canonical_people()
    weights, co_counts = agreement_weights(m)

    edges = []
    n = len(people)
    for i in range(n):
        for j in range(i + 1, n):
            if co_counts[i, j] == 0:
                continue
            w = float(weights[i, j])
            if signed:
                if w == 0 or abs(w) < tau:
                    continue
                edges.append(GraphEdge(u=people[i], v=people[j], weight=w, sign=1 if w > 0 else -1))
            else:
                if w < tau:
                    continue
                edges.append(GraphEdge(u=people[i], v=people[j], weight=w))

    logger.info("Similarity graph: %d nodes, %d edges (tau=%.3f, signed=%s)", n, len(edges), tau, signed)
    graph = GraphModel(nodes=people, edges=edges, signed=signed)
    linked = {e.u for e in edges} | {e.v for e in edges}
    isolated = [p for p in people if p not in linked]
    if isolated:
        graph.add_warning(
            WarningType.ISOLATED_PEOPLE,
            f"{len(isolated)} of {n} people have no edge",
            severity="low",
            details={"people": isolated},
        )
    return graph
