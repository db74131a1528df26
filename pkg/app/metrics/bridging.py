"""
Relation metric snapshots and bridging metrics (their changes over a window).
"""
import logging
from typing import Any, Callable, Dict, Literal, Mapping, Optional

from app.config import RWC_STEPS, RWC_WALKS
from app.io.serialization import digest_of
from app.metrics.controversy import exact_random_walk_controversy, random_walk_controversy
from app.metrics.graph import ei_index, modularity
from app.models.relations import Clustering, GraphModel
from app.models.reports import BridgingMetricReport, RelationMetricReport
from app.utils.errors import BridgeRankError, ErrorType, InputError

logger = logging.getLogger(__name__)

# Value recorded for a metric the graph cannot support when strict=False
UNDEFINED_METRIC_VALUE = 0.0
UNDEFINED_ERRORS = {ErrorType.EMPTY_GRAPH, ErrorType.EMPTY_GROUP_GRAPH}


def relation_report(
    tick: int,
    g: GraphModel,
    c: Clustering,
    extra: Optional[Mapping[str, float]] = None,
    rwc_walks: int = RWC_WALKS,
    rwc_steps: int = RWC_STEPS,
    rwc_method: Literal["monte_carlo", "exact"] = "monte_carlo",
    seed: int = 0,
    strict: bool = True,
) -> RelationMetricReport:
    """
    Modularity, E-I index and RWC (plus its standard error) for one snapshot.

    RWC is only reported when the clustering has exactly two groups. With
    strict=False a metric that needs edges the graph lacks is recorded as 0
    and logged instead of raising.
    """
    def measure(name: str, compute: Callable[[], Any]) -> Optional[Any]:
        try:
            return compute()
        except BridgeRankError as e:
            if strict or e.error_type not in UNDEFINED_ERRORS:
                raise
            logger.warning("Tick %d: %s undefined (%s); recorded as %s", tick, name, e.message, UNDEFINED_METRIC_VALUE)
            return None

    q = measure("modularity", lambda: modularity(g, c))
    ei = measure("ei", lambda: ei_index(g, c))
    values: Dict[str, float] = {
        "modularity": UNDEFINED_METRIC_VALUE if q is None else q,
        "ei": UNDEFINED_METRIC_VALUE if ei is None else ei,
    }

    if len(c.groups()) == 2:
        if rwc_method == "exact":
            estimate = measure("rwc", lambda: exact_random_walk_controversy(g, c, steps=rwc_steps))
        else:
            estimate = measure(
                "rwc",
                lambda: random_walk_controversy(g, c, walks=rwc_walks, steps=rwc_steps, seed=seed),
            )
        values["rwc"] = estimate.value if estimate is not None else UNDEFINED_METRIC_VALUE
        values["rwc_se"] = estimate.standard_error if estimate is not None else 0.0

    for name, value in (extra or {}).items():
        values[name] = float(value)

    return RelationMetricReport(
        timestamp=tick,
        values=values,
        inputs_digest=digest_of({
            "graph": g.model_dump(mode="json"),
            "labels": c.labels,
            "extra": dict(extra or {}),
        }),
    )


def bridging_delta(
    r0: RelationMetricReport,
    r1: RelationMetricReport,
    prevalence: Optional[Mapping[str, float]] = None,
) -> BridgingMetricReport:
    """
    Element-wise r1 - r0 over a shared metric set.

    `prevalence` belongs to the later window and is copied as given.
    """
    if set(r0.values) != set(r1.values):
        only_0 = sorted(set(r0.values) - set(r1.values))
        only_1 = sorted(set(r1.values) - set(r0.values))
        raise InputError(
            ErrorType.MISMATCHED_METRICS,
            f"Reports measure different metrics (only earlier: {only_0}, only later: {only_1})",
            details={"only_earlier": only_0, "only_later": only_1},
        )
    if r0.timestamp > r1.timestamp:
        raise InputError(
            ErrorType.INVALID_CONFIG,
            f"Earlier report has tick {r0.timestamp} after later report tick {r1.timestamp}",
        )

    return BridgingMetricReport(
        window=(r0.timestamp, r1.timestamp),
        deltas={name: r1.values[name] - r0.values[name] for name in sorted(r0.values)},
        prevalence=dict(prevalence or {}),
    )
