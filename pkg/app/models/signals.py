"""
Signal models: per-item predicted impacts and the models that produce them.
"""
import math
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from app.config import (
    MF_EPOCHS,
    MF_FACTORS,
    MF_LAMBDA_FACTOR,
    MF_LAMBDA_INTERCEPT,
    MF_LEARNING_RATE,
    SCHEMA_VERSION,
)
from app.models.diagnostics import Diagnosed
from app.models.votes import ItemId, PersonId

SIGNAL_NAMES = (
    "engagement",
    "diverse_approval",
    "gac",
    "mf_intercept",
    "bimodality",
    "exposure_diversity",
)


class SignalVector(BaseModel):
    """Bridging and engagement signals for one item"""
    item: ItemId
    engagement: float = Field(description="Smoothed approval; viewer-specific at ranking time")
    diverse_approval: float = Field(ge=0.0, le=1.0)
    group_aware_consensus: float = Field(gt=0.0, lt=1.0)
    mf_intercept: float = 0.0
    bimodality: Optional[float] = Field(default=None, ge=0.0)
    exposure_diversity: Optional[float] = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def check_finite(self) -> "SignalVector":
        for name, value in self.as_dict().items():
            if value is not None and not math.isfinite(value):
                raise ValueError(f"Signal '{name}' is not finite")
        return self

    def as_dict(self) -> Dict[str, Optional[float]]:
        """Signals keyed by their value-model names"""
        return {
            "engagement": self.engagement,
            "diverse_approval": self.diverse_approval,
            "gac": self.group_aware_consensus,
            "mf_intercept": self.mf_intercept,
            "bimodality": self.bimodality,
            "exposure_diversity": self.exposure_diversity,
        }


class MFHyperparams(BaseModel):
    """Matrix factorization training settings"""
    factors: int = Field(default=MF_FACTORS, ge=0, description="Latent dimension f")
    lambda_intercept: float = Field(default=MF_LAMBDA_INTERCEPT, ge=0.0)
    lambda_factor: float = Field(default=MF_LAMBDA_FACTOR, ge=0.0)
    learning_rate: float = Field(default=MF_LEARNING_RATE, gt=0.0)
    epochs: int = Field(default=MF_EPOCHS, ge=1)
    seed: int = 0


class MFModel(Diagnosed):
    """Intercept + factor model of approval: r_ui ~ mu + b_u + b_i + p_u . q_i"""
    schema_version: str = SCHEMA_VERSION
    mu: float
    person_intercepts: Dict[PersonId, float]
    item_intercepts: Dict[ItemId, float]
    person_factors: Dict[PersonId, List[float]]
    item_factors: Dict[ItemId, List[float]]
    hyperparams: MFHyperparams
    loss_trace: List[float] = Field(default_factory=list)
    converged: bool = True

    @model_validator(mode="after")
    def check_factor_lengths(self) -> "MFModel":
        f = self.hyperparams.factors
        for vec in list(self.person_factors.values()) + list(self.item_factors.values()):
            if len(vec) != f:
                raise ValueError(f"Factor vectors must have length {f}")
        return self

    def predict(self, person: PersonId, item: ItemId) -> float:
        p = self.person_factors[person]
        q = self.item_factors[item]
        return (
            self.mu
            + self.person_intercepts[person]
            + self.item_intercepts[item]
            + sum(a * b for a, b in zip(p, q))
        )


class CredibilityScores(BaseModel):
    """Eigentrust-style credibility over people, L1-normalized"""
    schema_version: str = SCHEMA_VERSION
    scores: Dict[PersonId, float]
    damping: float
    iterations: int = Field(ge=0)
    residual: float = Field(ge=0.0)

    @model_validator(mode="after")
    def check_distribution(self) -> "CredibilityScores":
        if any(s < 0 for s in self.scores.values()):
            raise ValueError("Credibility scores must be non-negative")
        total = sum(self.scores.values())
        if self.scores and abs(total - 1.0) > 1e-8:
            raise ValueError(f"Credibility scores must sum to 1 (got {total})")
        return self
