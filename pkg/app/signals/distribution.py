"""
Distribution-shaped signals: response bimodality and exposure diversity.
"""
import logging
from collections import Counter
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy import stats

from app.config import BIMODALITY_MIN_SAMPLES, BIMODALITY_THRESHOLD
from app.models.ranking import RankedFeed
from app.models.votes import GroupId, ItemId, VoteMatrix
from app.utils.errors import ErrorType, InputError, NumericalError

logger = logging.getLogger(__name__)


def bimodality(ratings: Sequence[float]) -> float:
    """
    Sarle's bimodality coefficient (skew^2 + 1) / kurtosis.

    Population moments, non-excess kurtosis. A uniform distribution scores
    5/9; a U-shaped one scores higher (two equal point masses score 1).
    """
    values = np.asarray(ratings, dtype=float)
    if values.size < BIMODALITY_MIN_SAMPLES:
        raise InputError(
            ErrorType.DEGENERATE_DISTRIBUTION,
            f"Bimodality needs at least {BIMODALITY_MIN_SAMPLES} ratings, got {values.size}",
        )
    if np.all(values == values[0]):
        raise NumericalError(ErrorType.DEGENERATE_DISTRIBUTION, "Constant ratings have no shape")

    skew = float(stats.skew(values, bias=True))
    kurt = float(stats.kurtosis(values, fisher=False, bias=True))
    return (skew ** 2 + 1.0) / kurt


def is_polarized(coefficient: float, threshold: float = BIMODALITY_THRESHOLD) -> bool:
    return coefficient > threshold


def item_bimodality(m: VoteMatrix, item: ItemId) -> Optional[float]:
    """Bimodality of an item's recorded votes, None when too few or constant"""
    if not m.has_item(item):
        raise InputError(ErrorType.UNKNOWN_ITEM, f"Unknown item '{item}'", details={"item": item})
    ratings = [int(v.value) for v in m.votes_for_item(item)]
    if len(ratings) < BIMODALITY_MIN_SAMPLES or len(set(ratings)) == 1:
        return None
    return bimodality(ratings)


def exposure_diversity(feed: RankedFeed, source_groups: Mapping[ItemId, GroupId]) -> float:
    """Shannon entropy (bits) of source groups over the feed's slots"""
    missing = [a.object for a in feed.allocations if a.object not in source_groups]
    if missing:
        raise InputError(
            ErrorType.UNKNOWN_ITEM,
            f"No source group for item '{missing[0]}'",
            details={"items": missing},
        )
    if not feed.allocations:
        return 0.0
    counts = Counter(source_groups[a.object] for a in feed.allocations)
    entropy = float(stats.entropy(list(counts.values()), base=2))
    return max(entropy, 0.0)
