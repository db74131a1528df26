"""
Relation models: formal representations of relationships in a population.

Space-based (positions in an opinion space), graph-based (weighted person
graph), aggregate (per-group approval counts) and the clustering that links
them.
"""
from typing import Dict, List, Optional

import networkx as nx
from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import SCHEMA_VERSION
from app.models.diagnostics import Diagnosed
from app.models.votes import GroupId, ItemId, PersonId


class SpaceModel(Diagnosed):
    """People (and optionally items) as points in a low-dimensional space"""
    schema_version: str = SCHEMA_VERSION
    dimension: int = Field(ge=1)
    person_positions: Dict[PersonId, List[float]]
    item_positions: Optional[Dict[ItemId, List[float]]] = None
    explained_variance: List[float] = Field(
        default_factory=list,
        description="Fraction of total variance per retained component; empty when undefined",
    )
    total_variance: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def check_dimensions(self) -> "SpaceModel":
        for pid, vec in self.person_positions.items():
            if len(vec) != self.dimension:
                raise ValueError(f"Position of '{pid}' has length {len(vec)}, expected {self.dimension}")
        for iid, vec in (self.item_positions or {}).items():
            if len(vec) != self.dimension:
                raise ValueError(f"Position of item '{iid}' has length {len(vec)}, expected {self.dimension}")
        return self

    @field_validator("explained_variance")
    @classmethod
    def check_variance(cls, v: List[float]) -> List[float]:
        for frac in v:
            if frac < -1e-12 or frac > 1 + 1e-12:
                raise ValueError("explained_variance entries must lie in [0, 1]")
        return v

    @property
    def people(self) -> List[PersonId]:
        return list(self.person_positions.keys())


class GraphEdge(BaseModel):
    """Undirected weighted edge between two people"""
    u: PersonId
    v: PersonId
    weight: float
    sign: Optional[int] = Field(default=None, description="+1 / -1 for signed graphs")

    @model_validator(mode="after")
    def check_edge(self) -> "GraphEdge":
        if self.u == self.v:
            raise ValueError(f"Self-loop on '{self.u}'")
        if self.sign is not None and self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        return self


class GraphModel(Diagnosed):
    """People as nodes of a weighted (optionally signed) graph"""
    schema_version: str = SCHEMA_VERSION
    nodes: List[PersonId]
    edges: List[GraphEdge] = Field(default_factory=list)
    signed: bool = False

    @model_validator(mode="after")
    def check_edges(self) -> "GraphModel":
        node_set = set(self.nodes)
        seen = set()
        for edge in self.edges:
            if edge.u not in node_set or edge.v not in node_set:
                raise ValueError(f"Edge ({edge.u}, {edge.v}) references an unknown node")
            key = frozenset((edge.u, edge.v))
            if key in seen:
                raise ValueError(f"Duplicate edge ({edge.u}, {edge.v})")
            seen.add(key)
            if not self.signed and edge.weight < 0:
                raise ValueError("Unsigned graphs require non-negative weights")
            if self.signed and edge.sign is None:
                raise ValueError("Signed graphs require a sign on every edge")
        return self

    def to_networkx(self) -> nx.Graph:
        """Weighted networkx view; signed edges keep |weight| and a 'sign' attribute"""
        graph = nx.Graph()
        graph.add_nodes_from(self.nodes)
        for edge in self.edges:
            attrs = {"weight": abs(edge.weight) if self.signed else edge.weight}
            if edge.sign is not None:
                attrs["sign"] = edge.sign
            graph.add_edge(edge.u, edge.v, **attrs)
        return graph

    @property
    def n_edges(self) -> int:
        return len(self.edges)


class GroupCounts(BaseModel):
    """Vote counts for one item within one group"""
    agrees: int = Field(default=0, ge=0)
    disagrees: int = Field(default=0, ge=0)
    seen: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_counts(self) -> "GroupCounts":
        if self.agrees + self.disagrees > self.seen:
            raise ValueError("agrees + disagrees cannot exceed seen")
        return self

    @property
    def approval_rate(self) -> float:
        """Raw agrees/seen; 0 when nobody in the group saw the item"""
        return self.agrees / self.seen if self.seen else 0.0

    @property
    def smoothed_approval(self) -> float:
        """Laplace-smoothed (agrees + 1) / (seen + 2)"""
        return (self.agrees + 1) / (self.seen + 2)


class ItemAggregate(BaseModel):
    """Aggregate relation of one item with the population"""
    overall_approval: float = Field(ge=0.0, le=1.0)
    per_group: Dict[GroupId, GroupCounts]

    @property
    def agrees(self) -> int:
        return sum(c.agrees for c in self.per_group.values())

    @property
    def seen(self) -> int:
        return sum(c.seen for c in self.per_group.values())


class AggregateModel(BaseModel):
    """Per-item, per-group approval counts"""
    schema_version: str = SCHEMA_VERSION
    groups: List[GroupId]
    per_item: Dict[ItemId, ItemAggregate]


class Clustering(Diagnosed):
    """Group labels over people plus fit quality"""
    schema_version: str = SCHEMA_VERSION
    k: int = Field(ge=1)
    labels: Dict[PersonId, GroupId]
    centroids: List[List[float]] = Field(default_factory=list)
    silhouette: float = Field(ge=-1.0, le=1.0)
    silhouette_by_k: Dict[int, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_groups(self) -> "Clustering":
        present = set(self.labels.values())
        if len(present) != self.k:
            raise ValueError(f"Clustering declares k={self.k} but has {len(present)} non-empty groups")
        if self.centroids and len(self.centroids) != self.k:
            raise ValueError("One centroid per group is required")
        return self

    def groups(self) -> List[GroupId]:
        """Group ids in sorted order"""
        return sorted(set(self.labels.values()))

    def members(self, group: GroupId) -> List[PersonId]:
        return sorted(p for p, g in self.labels.items() if g == group)

    def group_of(self, person: PersonId) -> Optional[GroupId]:
        return self.labels.get(person)

    @classmethod
    def from_labels(cls, labels: Dict[PersonId, GroupId]) -> "Clustering":
        """Clustering from known labels (no positions, silhouette undefined -> 0)"""
        return cls(k=len(set(labels.values())), labels=dict(labels), silhouette=0.0)
