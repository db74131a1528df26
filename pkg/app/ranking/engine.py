"""
Allocation process: predict each candidate's impacts, score them with a value
model and realize the best top_k allocations as a ranked feed.
"""
import logging
from typing import Dict, Iterable, Optional

from app.config import SCORE_DECIMALS
from app.io.serialization import digest_of
from app.models.ranking import AtomicAllocation, RankedFeed, ValueModel
from app.models.relations import AggregateModel, Clustering, GroupCounts
from app.models.signals import MFHyperparams, SignalVector
from app.models.votes import ItemId, PersonId, VoteMatrix, VoteValue
from app.relation.aggregate import aggregate
from app.signals.approval import consensus_from_counts
from app.signals.table import compute_signals
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def _viewer_group(viewer: PersonId, c: Clustering) -> str:
    group = c.group_of(viewer)
    if group is None:
        raise InputError(
            ErrorType.UNKNOWN_VIEWER,
            f"Viewer '{viewer}' has no group in the clustering",
            details={"viewer": viewer},
        )
    return group


def predict_engagement(viewer: PersonId, item: ItemId, m: VoteMatrix, c: Clustering) -> float:
    """Viewer's own-group approval of the item, (agrees + 1) / (seen + 2)"""
    group = _viewer_group(viewer, c)
    counts = GroupCounts()
    if m.has_item(item):
        agrees = seen = 0
        for vote in m.votes_for_item(item):
            if c.labels.get(vote.person) == group:
                seen += 1
                if vote.value == VoteValue.AGREE:
                    agrees += 1
        counts = GroupCounts(agrees=agrees, seen=seen)
    return counts.smoothed_approval


def score_allocation(
    viewer: PersonId,
    item: ItemId,
    signals: SignalVector,
    v: ValueModel,
) -> float:
    """
    Weighted sum of signals under the value model.

    `signals.engagement` is taken as given; callers scoring for a viewer pass
    a vector whose engagement is that viewer's prediction.
    """
    available = signals.as_dict()
    score = 0.0
    for name in v.active_signals():
        value = available.get(name)
        if value is None:
            raise InputError(
                ErrorType.MISSING_SIGNAL,
                f"Value model weights '{name}' but item '{item}' has no such signal",
                details={"signal": name, "item": item, "viewer": viewer},
            )
        score += v.weights[name] * value
    return score


class RankingContext:
    """Relation models and item signals shared by every viewer's ranking"""

    def __init__(
        self,
        matrix: VoteMatrix,
        clustering: Clustering,
        signals: Optional[Dict[ItemId, SignalVector]] = None,
        aggregate_model: Optional[AggregateModel] = None,
        hyperparams: Optional[MFHyperparams] = None,
        extra_items: Iterable[ItemId] = (),
        fit_mf: bool = True,
    ):
        self.matrix = matrix
        self.clustering = clustering
        self.aggregate = aggregate_model or aggregate(matrix, clustering)
        self.signals = signals if signals is not None else compute_signals(
            matrix,
            clustering,
            agg=self.aggregate,
            hyperparams=hyperparams,
            extra_items=extra_items,
            fit_mf=fit_mf,
        )

    @classmethod
    def for_value_model(
        cls,
        matrix: VoteMatrix,
        clustering: Clustering,
        v: ValueModel,
        extra_items: Iterable[ItemId] = (),
        hyperparams: Optional[MFHyperparams] = None,
    ) -> "RankingContext":
        """Skips the factorization fit when the value model ignores mf_intercept"""
        return cls(
            matrix,
            clustering,
            hyperparams=hyperparams,
            extra_items=extra_items,
            fit_mf="mf_intercept" in v.active_signals(),
        )

    def engagement(self, viewer: PersonId, item: ItemId) -> float:
        group = _viewer_group(viewer, self.clustering)
        per_item = self.aggregate.per_item.get(item)
        if per_item is None or group not in per_item.per_group:
            return GroupCounts().smoothed_approval
        return per_item.per_group[group].smoothed_approval

    def signal_vector(self, item: ItemId) -> SignalVector:
        """Item signals; an item nobody has voted on gets the prior vector"""
        if item in self.signals:
            return self.signals[item]
        empty = {g: GroupCounts() for g in self.clustering.groups()}
        return SignalVector(
            item=item,
            engagement=GroupCounts().smoothed_approval,
            diverse_approval=0.0,
            group_aware_consensus=consensus_from_counts(empty),
            mf_intercept=0.0,
        )

    def viewer_signals(self, viewer: PersonId, item: ItemId) -> SignalVector:
        return self.signal_vector(item).model_copy(update={"engagement": self.engagement(viewer, item)})


def score_key(score: float, v: ValueModel) -> float:
    """Scale-free comparison key for a score under `v`"""
    total = sum(abs(w) for w in v.weights.values())
    return round(score / total, SCORE_DECIMALS)


def rank(
    viewer: PersonId,
    candidates: Iterable[ItemId],
    context: RankingContext,
    v: ValueModel,
) -> RankedFeed:
    """
    Score every candidate for the viewer and keep the top_k.

    Order is by score, highest first. Scores are compared after dividing by the
    total absolute weight and rounding to SCORE_DECIMALS places, so sums that
    are equal in exact arithmetic tie regardless of weight scale; ties fall
    back to item id. Each allocation's properties
    carry the score and every component signal.
    """
    pool = sorted(set(candidates))
    if not pool:
        raise InputError(ErrorType.EMPTY_INPUT, f"No candidates to rank for viewer '{viewer}'")

    group = _viewer_group(viewer, context.clustering)
    scored = []
    for item in pool:
        signals = context.viewer_signals(viewer, item)
        scored.append((score_allocation(viewer, item, signals, v), item, signals))
    scored.sort(key=lambda entry: (-score_key(entry[0], v), entry[1]))

    allocations = [
        AtomicAllocation(
            slot=slot,
            object=item,
            properties={
                "score": score,
                "viewer_group": group,
                "signals": signals.as_dict(),
            },
        )
        for slot, (score, item, signals) in enumerate(scored[: v.top_k], start=1)
    ]
    logger.debug("Ranked %d candidates for %s; top %s", len(pool), viewer, allocations[0].object)
    return RankedFeed(viewer=viewer, allocations=allocations, value_model_digest=digest_of(v))
