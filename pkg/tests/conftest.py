"""
Shared fixtures: the small vote tables used across suites and graph builders.

F1  six people in two groups (A = u1..u3, B = u4..u6) voting on a partisan,
    a bridging and an unpopular item.
F1m F1 plus a group-B partisan item.
F2  two blobs of ten people voting +1 / -1 on five items, four Passes as noise.
F3  two factions; X approved by both, Y by A only, Z by B only.
"""
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

import pytest

from app.io.serialization import read_votes_csv
from app.models import Clustering, GraphEdge, GraphModel, VoteMatrix
from app.relation import build_vote_matrix

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

F1_LABELS = {"u1": "A", "u2": "A", "u3": "A", "u4": "B", "u5": "B", "u6": "B"}


def f1_records() -> List[Tuple[str, str, int]]:
    records = []
    for u in ("u1", "u2", "u3"):
        records.append((u, "i_partisan", 1))
    for u in ("u4", "u5", "u6"):
        records.append((u, "i_partisan", -1))
    records += [
        ("u1", "i_bridge", 1), ("u2", "i_bridge", 1), ("u3", "i_bridge", 0),
        ("u4", "i_bridge", 1), ("u5", "i_bridge", 1), ("u6", "i_bridge", 0),
    ]
    for u in F1_LABELS:
        records.append((u, "i_unpopular", -1))
    return records


@pytest.fixture
def f1() -> VoteMatrix:
    return build_vote_matrix(f1_records())


@pytest.fixture
def f1_clustering() -> Clustering:
    return Clustering.from_labels(F1_LABELS)


@pytest.fixture
def f1m() -> VoteMatrix:
    records = f1_records()
    records += [(u, "i_partisan_b", -1) for u in ("u1", "u2", "u3")]
    records += [(u, "i_partisan_b", 1) for u in ("u4", "u5", "u6")]
    return build_vote_matrix(records)


@pytest.fixture
def f2() -> VoteMatrix:
    return read_votes_csv(FIXTURES / "f2_votes.csv")


F2_BLOB_A = {f"p{n:02d}" for n in range(1, 11)}


@pytest.fixture
def f3() -> VoteMatrix:
    records = []
    for p in ("a1", "a2", "a3"):
        records += [(p, "X", 1), (p, "Y", 1), (p, "Z", -1)]
    for p in ("b1", "b2", "b3"):
        records += [(p, "X", 1), (p, "Y", -1), (p, "Z", 1)]
    return build_vote_matrix(records)


# Graph builders

def make_graph(edges: Iterable[Tuple[str, str]], nodes: Iterable[str] = (), weight: float = 1.0) -> GraphModel:
    edge_list = [GraphEdge(u=u, v=v, weight=weight) for u, v in edges]
    all_nodes = set(nodes) | {e.u for e in edge_list} | {e.v for e in edge_list}
    return GraphModel(nodes=sorted(all_nodes), edges=edge_list)


def clique_edges(nodes: List[str]) -> List[Tuple[str, str]]:
    return list(combinations(nodes, 2))


def two_cliques(size: int = 5) -> Tuple[GraphModel, Clustering]:
    a = [f"a{i}" for i in range(size)]
    b = [f"b{i}" for i in range(size)]
    graph = make_graph(clique_edges(a) + clique_edges(b))
    labels: Dict[str, str] = {**{n: "A" for n in a}, **{n: "B" for n in b}}
    return graph, Clustering.from_labels(labels)


def barbell(size: int = 5) -> Tuple[GraphModel, Clustering]:
    a = [f"a{i}" for i in range(size)]
    b = [f"b{i}" for i in range(size)]
    graph = make_graph(clique_edges(a) + clique_edges(b) + [(a[-1], b[0])])
    labels = {**{n: "A" for n in a}, **{n: "B" for n in b}}
    return graph, Clustering.from_labels(labels)


def complete_split(n: int) -> Tuple[GraphModel, Clustering]:
    nodes = [f"n{i:02d}" for i in range(n)]
    graph = make_graph(clique_edges(nodes))
    labels = {node: ("A" if i < n // 2 else "B") for i, node in enumerate(nodes)}
    return graph, Clustering.from_labels(labels)
