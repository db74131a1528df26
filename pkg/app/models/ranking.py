"""
Allocation models: value model, atomic allocations and ranked feeds.
"""
from typing import Any, Dict, List

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import SCHEMA_VERSION
from app.models.signals import SIGNAL_NAMES
from app.models.votes import ItemId, PersonId


class ValueModel(BaseModel):
    """Weighted sum over signals; top_k slots are realized"""
    weights: Dict[str, float]
    top_k: int = Field(default=10, ge=1)

    @field_validator("weights")
    @classmethod
    def validate_weights(cls, v: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(v) - set(SIGNAL_NAMES))
        if unknown:
            raise ValueError(f"Unknown signal(s) {unknown}; expected names from {list(SIGNAL_NAMES)}")
        if not any(w != 0 for w in v.values()):
            raise ValueError("Value model needs at least one nonzero weight")
        return v

    def active_signals(self) -> List[str]:
        """Signals with nonzero weight, sorted by name"""
        return sorted(name for name, w in self.weights.items() if w != 0)

    def scaled(self, factor: float) -> "ValueModel":
        return ValueModel(
            weights={k: w * factor for k, w in self.weights.items()},
            top_k=self.top_k,
        )

    @classmethod
    def engagement_only(cls, top_k: int = 10) -> "ValueModel":
        return cls(weights={"engagement": 1.0}, top_k=top_k)

    @classmethod
    def bridging(cls, top_k: int = 10) -> "ValueModel":
        return cls(weights={"engagement": 1.0, "gac": 1.0}, top_k=top_k)


class AtomicAllocation(BaseModel):
    """One object filling one slot"""
    slot: int = Field(ge=1)
    object: ItemId
    properties: Dict[str, Any] = Field(
        default_factory=dict,
        description="Context, score and per-signal components (audit trail)",
    )


class RankedFeed(BaseModel):
    """Realized allocations for one viewer, best first"""
    schema_version: str = SCHEMA_VERSION
    viewer: PersonId
    allocations: List[AtomicAllocation] = Field(default_factory=list)
    value_model_digest: str

    @model_validator(mode="after")
    def check_slots(self) -> "RankedFeed":
        slots = [a.slot for a in self.allocations]
        if slots != list(range(1, len(slots) + 1)):
            raise ValueError("Slots must be unique and contiguous from 1")
        return self

    def items(self) -> List[ItemId]:
        return [a.object for a in self.allocations]

    def top(self) -> ItemId:
        return self.allocations[0].object
