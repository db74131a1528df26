"""Data models for the bridging ranking engine"""
from app.models.diagnostics import Diagnosed, ModelWarning, WarningType
from app.models.votes import GroupId, ItemId, PersonId, Vote, VoteMatrix, VoteValue
from app.models.relations import (
    AggregateModel,
    Clustering,
    GraphEdge,
    GraphModel,
    GroupCounts,
    ItemAggregate,
    SpaceModel,
)
from app.models.signals import (
    SIGNAL_NAMES,
    CredibilityScores,
    MFHyperparams,
    MFModel,
    SignalVector,
)
from app.models.ranking import AtomicAllocation, RankedFeed, ValueModel
from app.models.reports import (
    BridgingMetricReport,
    ControversyEstimate,
    RelationMetricReport,
)
from app.models.simulation import (
    AgentState,
    Interaction,
    PairedComparison,
    PolicyOutcome,
    SimConfig,
    SimItem,
    SimulationResult,
    SimWorld,
    TickFeed,
)
from app.models.manifest import RunManifest

__all__ = [
    # Diagnostics
    "Diagnosed",
    "ModelWarning",
    "WarningType",
    # Votes
    "PersonId",
    "ItemId",
    "GroupId",
    "Vote",
    "VoteValue",
    "VoteMatrix",
    # Relation models
    "SpaceModel",
    "GraphEdge",
    "GraphModel",
    "GroupCounts",
    "ItemAggregate",
    "AggregateModel",
    "Clustering",
    # Signals
    "SIGNAL_NAMES",
    "SignalVector",
    "MFHyperparams",
    "MFModel",
    "CredibilityScores",
    # Ranking
    "ValueModel",
    "AtomicAllocation",
    "RankedFeed",
    # Reports
    "ControversyEstimate",
    "RelationMetricReport",
    "BridgingMetricReport",
    # Simulation
    "SimConfig",
    "AgentState",
    "SimItem",
    "Interaction",
    "SimWorld",
    "TickFeed",
    "SimulationResult",
    "PolicyOutcome",
    "PairedComparison",
    # Manifest
    "RunManifest",
]
