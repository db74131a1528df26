"""
Formal graph measures over a relation graph and a partition of its nodes.
"""
import logging
from typing import Dict, List, Tuple

import networkx as nx

from app.models.relations import Clustering, GraphModel
from app.models.votes import GroupId, PersonId
from app.utils.errors import ErrorType, InputError

logger = logging.getLogger(__name__)


def partition_of(g: GraphModel, c: Clustering) -> Dict[GroupId, List[PersonId]]:
    """Graph nodes grouped by label; every node must be labelled"""
    unlabeled = [n for n in g.nodes if n not in c.labels]
    if unlabeled:
        raise InputError(
            ErrorType.UNLABELED_PERSON,
            f"{len(unlabeled)} graph node(s) have no group, e.g. '{unlabeled[0]}'",
            details={"people": unlabeled[:10]},
        )
    groups: Dict[GroupId, List[PersonId]] = {}
    for node in sorted(g.nodes):
        groups.setdefault(c.labels[node], []).append(node)
    return dict(sorted(groups.items()))


def _require_weight(graph: nx.Graph) -> float:
    total = graph.size(weight="weight")
    if graph.number_of_edges() == 0 or total <= 0:
        raise InputError(ErrorType.EMPTY_GRAPH, "Metric needs at least one edge with positive weight")
    return total


def modularity(g: GraphModel, c: Clustering) -> float:
    """Newman modularity Q = sum_g (e_g / M - (d_g / 2M)^2) on edge weights"""
    graph = g.to_networkx()
    _require_weight(graph)
    communities = [set(members) for members in partition_of(g, c).values()]
    return float(nx.community.modularity(graph, communities, weight="weight"))


def ei_index(g: GraphModel, c: Clustering) -> float:
    """Krackhardt E-I index: (external - internal) / (external + internal) weight"""
    partition_of(g, c)
    internal = 0.0
    external = 0.0
    for u, v, w in g.to_networkx().edges(data="weight", default=1.0):
        if c.labels[u] == c.labels[v]:
            internal += w
        else:
            external += w
    if internal + external <= 0:
        raise InputError(ErrorType.EMPTY_GRAPH, "E-I index needs at least one edge with positive weight")
    return (external - internal) / (external + internal)


def triangles(graph: nx.Graph) -> List[Tuple[PersonId, PersonId, PersonId]]:
    """Each triangle once, as sorted node triples"""
    order = {n: i for i, n in enumerate(sorted(graph.nodes))}
    found = []
    for u, v in graph.edges:
        a, b = (u, v) if order[u] < order[v] else (v, u)
        for w in nx.common_neighbors(graph, a, b):
            if order[w] > order[b]:
                found.append((a, b, w))
    return sorted(found)


def balance_fraction(g: GraphModel) -> float:
    """
    Share of triangles with an even number of negative edges.

    Unsigned graphs count every edge as positive.
    """
    graph = g.to_networkx()
    tris = triangles(graph)
    if not tris:
        raise InputError(ErrorType.NO_TRIANGLES, "Balance needs at least one triangle")

    balanced = 0
    for a, b, w in tris:
        negatives = sum(
            1 for x, y in ((a, b), (b, w), (a, w))
            if graph[x][y].get("sign", 1) < 0
        )
        if negatives % 2 == 0:
            balanced += 1
    return balanced / len(tris)
