"""
Metric reports: relation metrics (snapshots) and bridging metrics (deltas).
"""
import math
from typing import Dict, Tuple

from pydantic import BaseModel, Field, model_validator

from app.config import SCHEMA_VERSION


class ControversyEstimate(BaseModel):
    """Random walk controversy with its Monte Carlo standard error"""
    value: float
    standard_error: float = Field(ge=0.0)
    walks: int = Field(ge=0)
    steps: int = Field(ge=0)
    p_stay: Dict[str, float] = Field(
        default_factory=dict,
        description="P(end in own group | start in group), per group",
    )


class RelationMetricReport(BaseModel):
    """Snapshot of relation metrics at one tick"""
    schema_version: str = SCHEMA_VERSION
    timestamp: int = Field(ge=0)
    values: Dict[str, float]
    inputs_digest: str = ""

    @model_validator(mode="after")
    def check_finite(self) -> "RelationMetricReport":
        for name, value in self.values.items():
            if not math.isfinite(value):
                raise ValueError(f"Metric '{name}' is not finite")
        return self


class BridgingMetricReport(BaseModel):
    """Change of relation metrics over a window"""
    schema_version: str = SCHEMA_VERSION
    window: Tuple[int, int]
    deltas: Dict[str, float]
    prevalence: Dict[str, float] = Field(default_factory=dict)
