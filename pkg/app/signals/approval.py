"""
Approval-based bridging signals: diverse approval and group-aware consensus.
"""
import logging
from typing import Dict

from app.config import DIVERSE_APPROVAL_MOTIF_THRESHOLD
from app.models.relations import AggregateModel, Clustering, GroupCounts
from app.models.votes import GroupId, ItemId, VoteMatrix, VoteValue
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def _require_groups(n_groups: int) -> None:
    if n_groups < 2:
        raise InputError(
            ErrorType.SINGLE_GROUP,
            f"Bridging signals need at least 2 groups, got {n_groups}",
        )


def group_counts(m: VoteMatrix, c: Clustering, item: ItemId) -> Dict[GroupId, GroupCounts]:
    """Per-group agrees/disagrees/seen for one item"""
    if not m.has_item(item):
        raise InputError(ErrorType.UNKNOWN_ITEM, f"Unknown item '{item}'", details={"item": item})

    counts = {g: {"agrees": 0, "disagrees": 0, "seen": 0} for g in c.groups()}
    for vote in m.votes_for_item(item):
        group = c.group_of(vote.person)
        if group is None:
            raise InputError(
                ErrorType.UNLABELED_PERSON,
                f"Voter '{vote.person}' has no group",
                details={"person": vote.person},
            )
        counts[group]["seen"] += 1
        if vote.value == VoteValue.AGREE:
            counts[group]["agrees"] += 1
        elif vote.value == VoteValue.DISAGREE:
            counts[group]["disagrees"] += 1
    return {g: GroupCounts(**b) for g, b in counts.items()}


def diverse_approval(m: VoteMatrix, c: Clustering, item: ItemId) -> float:
    """Lowest raw approval rate across groups; unseen groups contribute 0"""
    _require_groups(c.k)
    counts = group_counts(m, c, item)
    return min(gc.approval_rate for gc in counts.values())


def approval_breadth(
    m: VoteMatrix,
    c: Clustering,
    item: ItemId,
    threshold: float = DIVERSE_APPROVAL_MOTIF_THRESHOLD,
) -> int:
    """Number of groups whose raw approval rate reaches the threshold"""
    counts = group_counts(m, c, item)
    return sum(1 for gc in counts.values() if gc.seen and gc.approval_rate >= threshold)


def consensus_from_counts(counts: Dict[GroupId, GroupCounts]) -> float:
    """Product over groups of (agrees + 1) / (seen + 2)"""
    product = 1.0
    for gc in counts.values():
        product *= gc.smoothed_approval
    return product


def group_aware_consensus(a: AggregateModel, item: ItemId) -> float:
    """
    Laplace-smoothed product of per-group approval rates.

    Rewards items that every group approves; one disapproving group pulls
    the product down regardless of how much the others like it.
    """
    _require_groups(len(a.groups))
    if item not in a.per_item:
        raise InputError(ErrorType.UNKNOWN_ITEM, f"Unknown item '{item}'", details={"item": item})
    return consensus_from_counts(a.per_item[item].per_group)
