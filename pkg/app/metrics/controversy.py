"""
Random walk controversy on a two-group relation graph.

Walks start at a uniformly chosen member of one group and take a fixed number
of hops on the weighted graph; a node with no edges keeps the walker in place.
With P_XX the share of walks started in X that end in X,

    RWC = P_XX * P_YY - P_XY * P_YX = P_XX + P_YY - 1

so 1 means no walk ever crosses and 0 means the ending group is independent
of the starting group.
"""
import logging
import math
from itertools import combinations
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np

from app.config import RWC_STEPS, RWC_WALKS
from app.metrics.graph import partition_of
from app.models.relations import Clustering, GraphModel
from app.models.reports import ControversyEstimate
from app.models.votes import GroupId, PersonId
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def transition_matrix(g: GraphModel) -> Tuple[List[PersonId], np.ndarray]:
    """Row-stochastic matrix over sorted nodes; isolated nodes self-loop"""
    nodes = sorted(g.nodes)
    adjacency = nx.to_numpy_array(g.to_networkx(), nodelist=nodes, weight="weight")
    totals = adjacency.sum(axis=1)
    isolated = np.flatnonzero(totals <= 0)
    adjacency[isolated, isolated] = 1.0
    totals[isolated] = 1.0
    return nodes, adjacency / totals[:, None]


def _two_groups(g: GraphModel, c: Clustering) -> Dict[GroupId, List[PersonId]]:
    groups = partition_of(g, c)
    if len(groups) < 2:
        raise InputError(ErrorType.SINGLE_GROUP, "Random walk controversy needs two groups")
    if len(groups) > 2:
        raise InputError(
            ErrorType.INVALID_CONFIG,
            f"Random walk controversy is defined for 2 groups, got {len(groups)}; "
            "use pairwise_random_walk_controversy",
            details={"groups": list(groups)},
        )

    graph = g.to_networkx()
    for label, members in groups.items():
        if not any(d > 0 for _, d in graph.degree(members, weight="weight")):
            raise InputError(
                ErrorType.EMPTY_GROUP_GRAPH,
                f"Group '{label}' has no edges",
                details={"group": label},
            )
    return groups


def _estimate(p_stay: Dict[GroupId, float], walks: int, steps: int) -> ControversyEstimate:
    p_x, p_y = p_stay.values()
    se = math.sqrt((p_x * (1 - p_x) + p_y * (1 - p_y)) / walks) if walks else 0.0
    return ControversyEstimate(
        value=p_x + p_y - 1.0,
        standard_error=se,
        walks=walks,
        steps=steps,
        p_stay=p_stay,
    )


def random_walk_controversy(
    g: GraphModel,
    c: Clustering,
    walks: int = RWC_WALKS,
    steps: int = RWC_STEPS,
    seed: int = 0,
) -> ControversyEstimate:
    """
    Monte Carlo RWC with `walks` walks per group.

    Each group draws from its own generator seeded by (seed, group index), so
    the estimate is reproducible for a given seed.
    """
    if walks < 1 or steps < 0:
        raise InputError(ErrorType.INVALID_CONFIG, "walks must be >= 1 and steps >= 0")
    groups = _two_groups(g, c)
    nodes, T = transition_matrix(g)
    index = {p: i for i, p in enumerate(nodes)}
    cumulative = np.cumsum(T, axis=1)
    cumulative[:, -1] = 1.0

    p_stay: Dict[GroupId, float] = {}
    for gi, (label, members) in enumerate(groups.items()):
        rng = np.random.default_rng([seed, gi])
        starts = np.array([index[p] for p in members], dtype=int)
        position = starts[rng.integers(0, len(starts), size=walks)]
        for _ in range(steps):
            u = rng.random(walks)
            position = (cumulative[position] <= u[:, None]).sum(axis=1)
        in_group = np.zeros(len(nodes), dtype=bool)
        in_group[starts] = True
        p_stay[label] = float(in_group[position].mean())

    estimate = _estimate(p_stay, walks, steps)
    logger.info(
        "RWC %.4f (se %.4f) from %d walks x %d steps",
        estimate.value, estimate.standard_error, walks, steps,
    )
    return estimate


def exact_random_walk_controversy(g: GraphModel, c: Clustering, steps: int = RWC_STEPS) -> ControversyEstimate:
    """RWC from the dense transition matrix raised to `steps`"""
    groups = _two_groups(g, c)
    nodes, T = transition_matrix(g)
    index = {p: i for i, p in enumerate(nodes)}
    power = np.linalg.matrix_power(T, steps)

    p_stay: Dict[GroupId, float] = {}
    for label, members in groups.items():
        idx = [index[p] for p in members]
        start = np.zeros(len(nodes))
        start[idx] = 1.0 / len(idx)
        p_stay[label] = float((start @ power)[idx].sum())
    return _estimate(p_stay, 0, steps)


def pairwise_random_walk_controversy(
    g: GraphModel,
    c: Clustering,
    walks: int = RWC_WALKS,
    steps: int = RWC_STEPS,
    seed: int = 0,
) -> Dict[str, ControversyEstimate]:
    """RWC for every pair of groups on the subgraph they induce, keyed 'a|b'"""
    groups = partition_of(g, c)
    if len(groups) < 2:
        raise InputError(ErrorType.SINGLE_GROUP, "Random walk controversy needs two groups")

    results: Dict[str, ControversyEstimate] = {}
    for a, b in combinations(groups, 2):
        members = set(groups[a]) | set(groups[b])
        sub = GraphModel(
            nodes=sorted(members),
            edges=[e for e in g.edges if e.u in members and e.v in members],
            signed=g.signed,
        )
        labels = {p: c.labels[p] for p in members}
        results[f"{a}|{b}"] = random_walk_controversy(
            sub, Clustering.from_labels(labels), walks=walks, steps=steps, seed=seed
        )
    return results
