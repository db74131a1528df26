"""
Motif prevalence over an interaction log.

Prevalence is motif instances in a tick window divided by the people active
in that window (anyone with at least one logged interaction).
"""
import logging
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple

from app.config import DIVERSE_APPROVAL_MOTIF_THRESHOLD
from app.models.relations import Clustering
from app.models.simulation import Interaction
from app.models.votes import ItemId, PersonId, VoteMatrix, VoteValue
from app.relation.aggregate import aggregate
from app.relation.votes import build_vote_matrix
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)

DIVERSE_APPROVAL = "diverse_approval"
CROSS_GROUP_APPROVAL = "cross_group_approval"
MOTIFS = (DIVERSE_APPROVAL, CROSS_GROUP_APPROVAL)


def interactions_from_votes(
    m: VoteMatrix,
    tick: int = 0,
    authorship: Optional[Mapping[ItemId, PersonId]] = None,
    clustering: Optional[Clustering] = None,
) -> List[Interaction]:
    """Treat a static vote matrix as one window of interactions"""
    authorship = authorship or {}
    log = []
    for vote in sorted(m.votes, key=lambda v: (v.person, v.item)):
        author = authorship.get(vote.item, "")
        cross = False
        if clustering is not None and author in clustering.labels:
            cross = clustering.labels[author] != clustering.labels.get(vote.person)
        log.append(Interaction(
            tick=tick,
            person=vote.person,
            item=vote.item,
            slot=0,
            value=int(vote.value),
            author=author,
            cross_group=cross,
        ))
    return log


def _diverse_approval_instances(
    window: List[Interaction],
    clustering: Optional[Clustering],
    threshold: float,
) -> int:
    if clustering is None:
        raise InputError(
            ErrorType.INVALID_CONFIG,
            "The diverse_approval motif needs group labels",
        )
    if clustering.k < 2:
        raise InputError(ErrorType.SINGLE_GROUP, "Diverse approval needs at least 2 groups")

    matrix = build_vote_matrix([(i.person, i.item, i.value) for i in window])
    agg = aggregate(matrix, clustering)
    qualifying = {
        item for item, ia in agg.per_item.items()
        if min(gc.approval_rate for gc in ia.per_group.values()) >= threshold
    }
    return sum(
        1 for i in window
        if i.item in qualifying and i.value == VoteValue.AGREE
    )


def _cross_group_instances(window: List[Interaction]) -> int:
    return sum(1 for i in window if i.cross_group and i.value == VoteValue.AGREE)


def signal_prevalence(
    history: Iterable[Interaction],
    motif: str,
    window: Tuple[int, int],
    clustering: Optional[Clustering] = None,
    threshold: float = DIVERSE_APPROVAL_MOTIF_THRESHOLD,
) -> float:
    """
    Motif instances per active person in the inclusive tick window.

    diverse_approval: Agree votes on items whose lowest per-group approval rate
    within the window reaches `threshold`.
    cross_group_approval: Agree votes on items authored by another group.
    """
    if motif not in MOTIFS:
        raise InputError(
            ErrorType.UNKNOWN_MOTIF,
            f"Unknown motif '{motif}'; expected one of {', '.join(MOTIFS)}",
            details={"motif": motif},
        )
    t0, t1 = window
    if t1 < t0:
        raise InputError(ErrorType.INVALID_CONFIG, f"Empty window [{t0}, {t1}]")

    in_window = [i for i in history if t0 <= i.tick <= t1]
    active = {i.person for i in in_window}
    if not active:
        return 0.0

    counters: Dict[str, Callable[[], int]] = {
        DIVERSE_APPROVAL: lambda: _diverse_approval_instances(in_window, clustering, threshold),
        CROSS_GROUP_APPROVAL: lambda: _cross_group_instances(in_window),
    }
    instances = counters[motif]()
    logger.info(
        "Prevalence %s over [%d, %d]: %d instances / %d people",
        motif, t0, t1, instances, len(active),
    )
    return instances / len(active)
