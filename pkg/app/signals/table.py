"""
Signal table: every item-global signal computed once per vote matrix.
"""
import logging
from typing import Dict, Iterable, Optional

from app.models.relations import AggregateModel, Clustering, GroupCounts
from app.models.signals import MFHyperparams, MFModel, SignalVector
from app.models.votes import ItemId, VoteMatrix, VoteValue
from app.relation.aggregate import aggregate
from app.signals.approval import consensus_from_counts
from app.signals.distribution import item_bimodality
from app.signals.factorization import fit_matrix_factorization

logger = logging.getLogger(__name__)


def has_training_votes(m: VoteMatrix) -> bool:
    return any(v.value != VoteValue.PASS for v in m.votes)


def compute_signals(
    m: VoteMatrix,
    c: Clustering,
    agg: Optional[AggregateModel] = None,
    mf_model: Optional[MFModel] = None,
    hyperparams: Optional[MFHyperparams] = None,
    extra_items: Iterable[ItemId] = (),
    fit_mf: bool = True,
) -> Dict[ItemId, SignalVector]:
    """
    SignalVector per item, sorted by item id.

    `engagement` here is the population-wide smoothed approval; the ranking
    engine swaps in the viewer's own-group rate. Items listed in
    `extra_items` but absent from the matrix get prior values (no votes).
    """
    agg = agg or aggregate(m, c)
    if mf_model is None and fit_mf and has_training_votes(m):
        mf_model = fit_matrix_factorization(m, hyperparams or MFHyperparams())

    groups = c.groups()
    zero_counts = {g: {"agrees": 0, "disagrees": 0, "seen": 0} for g in groups}
    table: Dict[ItemId, SignalVector] = {}
    for item in sorted(set(m.items) | set(extra_items)):
        if item in agg.per_item:
            per_group = agg.per_item[item].per_group
            agrees = agg.per_item[item].agrees
            seen = agg.per_item[item].seen
            bimodal = item_bimodality(m, item)
        else:
            per_group = {g: GroupCounts(**b) for g, b in zero_counts.items()}
            agrees, seen, bimodal = 0, 0, None

        intercept = 0.0
        if mf_model is not None:
            intercept = mf_model.item_intercepts.get(item, 0.0)

        table[item] = SignalVector(
            item=item,
            engagement=(agrees + 1) / (seen + 2),
            diverse_approval=min(gc.approval_rate for gc in per_group.values()),
            group_aware_consensus=consensus_from_counts(per_group),
            mf_intercept=intercept,
            bimodality=bimodal,
        )

    logger.info("Signals computed for %d items", len(table))
    return table
