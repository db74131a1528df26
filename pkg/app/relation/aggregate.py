"""
Aggregate relation model: per-item, per-group approval counts.
"""
import logging
from typing import Dict

from app.models.relations import AggregateModel, Clustering, GroupCounts, ItemAggregate
from app.models.votes import GroupId, VoteMatrix, VoteValue
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def aggregate(m: VoteMatrix, c: Clustering) -> AggregateModel:
    """
    Count agrees, disagrees and seen (any recorded vote, Pass included) per group.

    overall_approval = agrees / seen over all groups, 0 when nobody saw the item.
    """
    missing = [p for p in m.canonical_people() if p not in c.labels]
    if missing:
        raise InputError(
            ErrorType.UNLABELED_PERSON,
            f"{len(missing)} voter(s) have no group, e.g. '{missing[0]}'",
            details={"people": missing[:10]},
        )

    groups = c.groups()
    per_item: Dict[str, ItemAggregate] = {}
    for item in m.canonical_items():
        counts: Dict[GroupId, Dict[str, int]] = {g: {"agrees": 0, "disagrees": 0, "seen": 0} for g in groups}
        for vote in m.votes_for_item(item):
            bucket = counts[c.labels[vote.person]]
            bucket["seen"] += 1
            if vote.value == VoteValue.AGREE:
                bucket["agrees"] += 1
            elif vote.value == VoteValue.DISAGREE:
                bucket["disagrees"] += 1

        agrees = sum(b["agrees"] for b in counts.values())
        seen = sum(b["seen"] for b in counts.values())
        per_item[item] = ItemAggregate(
            overall_approval=agrees / seen if seen else 0.0,
            per_group={g: GroupCounts(**b) for g, b in counts.items()},
        )

    logger.info("Aggregate model: %d items over %d groups", len(per_item), len(groups))
    return AggregateModel(groups=groups, per_item=per_item)
