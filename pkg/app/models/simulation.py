"""
Simulator schemas: run configuration, world state, interaction log and results.
"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import (
    INITIAL_AFFECT,
    PANEL_SIZE,
    PASS_PROBABILITY,
    RWC_STEPS,
    SCHEMA_VERSION,
    SEED_AUDIENCE,
)
from app.models.ranking import RankedFeed, ValueModel
from app.models.reports import BridgingMetricReport, RelationMetricReport
from app.models.votes import GroupId, ItemId, PersonId, VoteMatrix

AgentId = PersonId


class SimConfig(BaseModel):
    """
    Seeded simulation settings.

    Opinion and affect dynamics are synthetic: attraction toward agreed items
    (optionally repulsion from far disagreed ones) and a thermometer that warms
    on cross-group approvals and cools on cross-group disagreements.
    """
    n_agents: int = Field(default=40, ge=1)
    n_groups: int = Field(default=2, ge=1)
    opinion_dimension: int = Field(default=2, ge=1)
    faction_separation: float = Field(default=4.0, ge=0.0)
    noise_scale: float = Field(default=1.0, ge=0.0)
    items_per_tick: int = Field(default=8, ge=1)
    feed_size: int = Field(default=3, ge=1)
    ticks: int = Field(default=10, ge=0)
    value_model: ValueModel = Field(default_factory=ValueModel.engagement_only)
    seed: int
    opinion_step: float = Field(default=0.1, ge=0.0, lt=1.0, description="eta")
    affect_step: float = Field(default=0.02, ge=0.0, lt=1.0, description="gamma")

    pass_probability: float = Field(default=PASS_PROBABILITY, ge=0.0, lt=1.0)
    candidate_window: int = Field(default=3, ge=1, description="Ticks an item stays eligible")
    seed_audience: int = Field(
        default=SEED_AUDIENCE, ge=0,
        description="Agents per group who vote on each new item before feeds are ranked",
    )
    item_moderation: float = Field(
        default=1.0, ge=0.0, le=1.0,
        description="Max pull of a new item from its author toward the population centre",
    )
    item_noise: float = Field(default=0.25, ge=0.0, description="Std of item position noise around the pulled author opinion")
    repulsion_beyond: Optional[float] = Field(default=None, gt=0.0)
    sybil_fraction: float = Field(default=0.0, ge=0.0, lt=1.0)

    panel_size: int = Field(default=PANEL_SIZE, ge=1)
    similarity_threshold: float = Field(default=0.0, ge=0.0, le=1.0)
    rwc_method: Literal["monte_carlo", "exact"] = "monte_carlo"
    rwc_walks: int = Field(default=2_000, ge=1)
    rwc_steps: int = Field(default=RWC_STEPS, ge=1)

    @model_validator(mode="after")
    def check_groups(self) -> "SimConfig":
        if self.n_groups > self.n_agents:
            raise ValueError("n_groups cannot exceed n_agents")
        return self


class AgentState(BaseModel):
    opinion: List[float]
    group: GroupId
    affect_out: float = Field(default=INITIAL_AFFECT, ge=0.0, le=100.0)
    sybil: bool = False


class SimItem(BaseModel):
    position: List[float]
    author: AgentId
    created_tick: int = Field(ge=0)


class Interaction(BaseModel):
    """One realized allocation and the viewer's response"""
    tick: int
    person: AgentId
    item: ItemId
    slot: int
    value: int
    author: AgentId
    cross_group: bool


class SimWorld(BaseModel):
    schema_version: str = SCHEMA_VERSION
    tick: int = 0
    agents: Dict[AgentId, AgentState]
    items: Dict[ItemId, SimItem] = Field(default_factory=dict)
    panel: Dict[ItemId, List[float]] = Field(
        default_factory=dict,
        description="Fixed panel items used to measure relations each tick",
    )
    history: List[Interaction] = Field(default_factory=list)
    votes: VoteMatrix = Field(default_factory=VoteMatrix)

    @field_validator("agents")
    @classmethod
    def check_agents(cls, v: Dict[AgentId, AgentState]) -> Dict[AgentId, AgentState]:
        if not v:
            raise ValueError("World needs at least one agent")
        return v

    def group_labels(self) -> Dict[AgentId, GroupId]:
        return {aid: a.group for aid, a in self.agents.items()}

    def group_sizes(self) -> Dict[GroupId, int]:
        sizes: Dict[GroupId, int] = {}
        for agent in self.agents.values():
            sizes[agent.group] = sizes.get(agent.group, 0) + 1
        return dict(sorted(sizes.items()))

    def mean_affect(self) -> float:
        return sum(a.affect_out for a in self.agents.values()) / len(self.agents)


class TickFeed(BaseModel):
    tick: int
    feed: RankedFeed


class SimulationResult(BaseModel):
    schema_version: str = SCHEMA_VERSION
    config: SimConfig
    reports: List[RelationMetricReport]
    bridging: Optional[BridgingMetricReport] = None
    affect_series: List[float]
    feeds: List[TickFeed] = Field(default_factory=list)
    sybil_gac_share: Optional[float] = None
    world: SimWorld

    def final(self) -> RelationMetricReport:
        return self.reports[-1]


class PolicyOutcome(BaseModel):
    """Final relation state of one seeded run under one policy"""
    seed: int
    policy: str
    final_rwc: Optional[float] = None
    final_modularity: float
    final_affect: float


class PairedComparison(BaseModel):
    """
    Same seeds under a baseline and a treatment policy.

    Sign tests count seeds where the treatment lowered RWC (or raised affect);
    tied seeds are dropped from the test.
    """
    schema_version: str = SCHEMA_VERSION
    baseline: str
    treatment: str
    seeds: List[int]
    outcomes: List[PolicyOutcome]
    median_rwc: Dict[str, float] = Field(default_factory=dict)
    median_affect: Dict[str, float] = Field(default_factory=dict)
    rwc_lower_count: int = 0
    affect_higher_count: int = 0
    rwc_sign_p: Optional[float] = None
    affect_sign_p: Optional[float] = None
