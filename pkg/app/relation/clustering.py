"""
Opinion-space clustering: k-means over a SpaceModel with k chosen by silhouette.
"""
import logging
from typing import Dict, List, Tuple

import numpy as np
from sklearn.cluster import KMeans
from sklearn.metrics import silhouette_score

from app.config import (
    K_RANGE_DEFAULT,
    KMEANS_MAX_ITER,
    KMEANS_RESTARTS,
    KMEANS_TOL,
    SILHOUETTE_TIE_EPS,
    VARIANCE_EPS,
)
from app.models.diagnostics import WarningType
from app.models.relations import Clustering, SpaceModel
from app.models.votes import GroupId, PersonId
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def canonical_labels(raw_labels: np.ndarray) -> Tuple[List[GroupId], Dict[int, int]]:
    """
    Renumber cluster labels by order of first appearance.

    Returns the relabelled ids as strings and the raw -> canonical mapping.
    """
    mapping: Dict[int, int] = {}
    for label in raw_labels:
        if int(label) not in mapping:
            mapping[int(label)] = len(mapping)
    return [str(mapping[int(label)]) for label in raw_labels], mapping


def _degenerate_clustering(people: List[PersonId], points: np.ndarray, k: int) -> Clustering:
    """Contiguous split of identical positions into k groups, flagged"""
    chunks = np.array_split(np.arange(len(people)), k)
    labels: Dict[PersonId, GroupId] = {}
    for g, chunk in enumerate(chunks):
        for idx in chunk:
            labels[people[int(idx)]] = str(g)
    centroid = points.mean(axis=0).tolist()
    clustering = Clustering(
        k=k,
        labels=labels,
        centroids=[list(centroid) for _ in range(k)],
        silhouette=0.0,
        silhouette_by_k={k: 0.0},
    )
    clustering.add_warning(
        WarningType.DEGENERATE_CLUSTERING,
        "All positions coincide; no cluster structure (silhouette 0)",
        severity="high",
        details={"people": len(people)},
    )
    logger.warning("Degenerate clustering: %d identical positions", len(people))
    return clustering


def cluster_people(
    s: SpaceModel,
    k_range: Tuple[int, int] = K_RANGE_DEFAULT,
    restarts: int = KMEANS_RESTARTS,
    seed: int = 0,
) -> Clustering:
    """
    Cluster people with seeded k-means++ and pick k by mean silhouette.

    Every k in the inclusive range is fit with `restarts` initializations; the
    k with the highest silhouette wins and ties go to the smaller k. Group ids
    are "0", "1", ... in order of first appearance over sorted person ids.
    """
    k_min, k_max = k_range
    if k_min < 2 or k_max < k_min:
        raise InputError(
            ErrorType.INVALID_CONFIG,
            f"k range [{k_min}, {k_max}] must satisfy 2 <= k_min <= k_max",
        )

    people = sorted(s.person_positions.keys())
    if len(people) <= k_max:
        raise InputError(
            ErrorType.TOO_FEW_PEOPLE,
            f"Clustering into up to {k_max} groups needs more than {k_max} people, got {len(people)}",
            details={"people": len(people), "k_max": k_max},
        )

    points = np.array([s.person_positions[p] for p in people], dtype=float)

    if float(np.ptp(points, axis=0).max()) < VARIANCE_EPS:
        return _degenerate_clustering(people, points, k_min)

    best = None
    scores: Dict[int, float] = {}
    for k in range(k_min, k_max + 1):
        model = KMeans(
            n_clusters=k,
            init="k-means++",
            n_init=restarts,
            max_iter=KMEANS_MAX_ITER,
            tol=KMEANS_TOL,
            random_state=seed,
        ).fit(points)

        n_distinct = len(set(model.labels_.tolist()))
        if n_distinct < k or n_distinct >= len(people):
            logger.info("k=%d skipped: %d distinct clusters", k, n_distinct)
            continue

        score = float(silhouette_score(points, model.labels_, metric="euclidean"))
        scores[k] = score
        logger.info("k=%d silhouette=%.4f", k, score)

        if best is None or score > best[0] + SILHOUETTE_TIE_EPS:
            best = (score, k, model)

    if best is None:
        return _degenerate_clustering(people, points, k_min)

    score, k, model = best
    labels, mapping = canonical_labels(model.labels_)
    inverse = {canon: raw for raw, canon in mapping.items()}
    centroids = [model.cluster_centers_[inverse[g]].tolist() for g in range(k)]

    clustering = Clustering(
        k=k,
        labels={p: labels[i] for i, p in enumerate(people)},
        centroids=centroids,
        silhouette=min(max(score, -1.0), 1.0),
        silhouette_by_k=scores,
    )
    if score <= 0:
        clustering.add_warning(
            WarningType.DEGENERATE_CLUSTERING,
            f"Best silhouette {score:.4f} indicates no cluster structure",
            severity="medium",
        )
    logger.info("Selected k=%d (silhouette %.4f)", k, score)
    return clustering


def silhouette_of(s: SpaceModel, c: Clustering) -> float:
    """Recompute the mean silhouette of a clustering over a space model"""
    people = sorted(s.person_positions.keys())
    points = np.array([s.person_positions[p] for p in people], dtype=float)
    labels = [c.labels[p] for p in people]
    return float(silhouette_score(points, labels, metric="euclidean"))
