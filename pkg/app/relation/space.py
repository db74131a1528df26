"""
Space-based relation model: PCA projection of the vote matrix.

Missing votes are imputed as 0 (the Pass encoding), columns are mean-centred
and people are projected onto the top principal components. Each component is
sign-fixed so that its largest-magnitude loading is positive.
"""
import logging

import numpy as np
from sklearn.decomposition import PCA

from app.config import VARIANCE_EPS
from app.models.diagnostics import WarningType
from app.models.relations import SpaceModel
from app.models.votes import VoteMatrix
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def fix_component_signs(components: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-|loading| entry is positive (first index wins ties)"""
    fixed = components.copy()
    for k in range(fixed.shape[0]):
        pivot = int(np.argmax(np.abs(fixed[k])))
        if fixed[k, pivot] < 0:
            fixed[k] = -fixed[k]
    return fixed


def pca_project(m: VoteMatrix, d: int = 2) -> SpaceModel:
    """
    Project people into a d-dimensional opinion space.

    Zero total variance (all rows identical) is not an error: every person
    lands at the origin and the model carries a zero_variance warning with
    explained_variance left empty.
    """
    people = m.canonical_people()
    items = m.canonical_items()

    if len(people) < 2:
        raise InputError(
            ErrorType.TOO_FEW_PEOPLE,
            f"PCA needs at least 2 people, got {len(people)}",
        )
    if d < 1 or d > min(len(people), len(items)):
        raise InputError(
            ErrorType.DIMENSION_MISMATCH,
            f"Projection dimension {d} must lie in [1, min(people, items)={min(len(people), len(items))}]",
            details={"d": d, "people": len(people), "items": len(items)},
        )

    values, _ = m.to_dense()
    centered = values - values.mean(axis=0, keepdims=True)
    total_variance = float(np.var(centered, axis=0).sum())

    if total_variance < VARIANCE_EPS:
        model = SpaceModel(
            dimension=d,
            person_positions={p: [0.0] * d for p in people},
            item_positions={it: [0.0] * d for it in items},
            explained_variance=[],
            total_variance=0.0,
        )
        model.add_warning(
            WarningType.ZERO_VARIANCE,
            "Vote matrix has zero variance (all rows identical); positions collapsed to the origin",
            severity="high",
        )
        logger.warning("PCA on zero-variance matrix: %d people placed at origin", len(people))
        return model

    pca = PCA(n_components=d, svd_solver="full")
    pca.fit(values)
    components = fix_component_signs(pca.components_)
    positions = centered @ components.T

    # Loadings scaled by component standard deviation
    component_std = np.sqrt(np.var(positions, axis=0))
    item_positions = components.T * component_std

    explained = [float(min(max(r, 0.0), 1.0)) for r in pca.explained_variance_ratio_]

    logger.info(
        "PCA projection: %d people, d=%d, explained variance %s",
        len(people), d, [round(e, 4) for e in explained],
    )

    return SpaceModel(
        dimension=d,
        person_positions={p: positions[i].tolist() for i, p in enumerate(people)},
        item_positions={it: item_positions[j].tolist() for j, it in enumerate(items)},
        explained_variance=explained,
        total_variance=total_variance,
    )


def reconstruction_error(m: VoteMatrix, space: SpaceModel) -> float:
    """Squared Frobenius error of the rank-d reconstruction of the centred matrix"""
    values, _ = m.to_dense()
    centered = values - values.mean(axis=0, keepdims=True)
    people = m.canonical_people()
    items = m.canonical_items()
    if not space.explained_variance:
        return float(np.sum(centered ** 2))

    scores = np.array([space.person_positions[p] for p in people])
    loadings = np.array([space.item_positions[it] for it in items])
    std = np.sqrt(np.var(scores, axis=0))
    safe = np.where(std > 0, std, 1.0)
    components = (loadings / safe).T
    approx = scores @ components
    return float(np.sum((centered - approx) ** 2))
