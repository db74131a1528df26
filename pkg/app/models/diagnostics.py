"""
Non-fatal diagnostics attached to model outputs.

Degenerate inputs that still allow a usable result (zero-variance projections,
structureless clusterings, factorizations that stopped early) are reported as
warnings on the returned model instead of raising, so pipelines keep going.
"""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class WarningType(str, Enum):
    """Diagnostic warning categories"""
    ZERO_VARIANCE = "zero_variance"
    DEGENERATE_CLUSTERING = "degenerate_clustering"
    NON_CONVERGENCE = "non_convergence"
    ISOLATED_PEOPLE = "isolated_people"


class ModelWarning(BaseModel):
    """A flagged condition on a computed model"""
    type: str = Field(description="Warning type code")
    message: str = Field(description="Human-readable explanation")
    details: Optional[Dict[str, Any]] = Field(default=None)
    severity: str = Field(default="medium", description="'low', 'medium', 'high'")


class Diagnosed(BaseModel):
    """Mixin for models that can carry warnings"""
    warnings: List[ModelWarning] = Field(default_factory=list)

    def add_warning(
        self,
        warning_type: WarningType,
        message: str,
        severity: str = "medium",
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        self.warnings.append(ModelWarning(
            type=warning_type.value,
            message=message,
            details=details,
            severity=severity,
        ))

    def has_warnings(self) -> bool:
        return len(self.warnings) > 0

    def has_warning(self, warning_type: WarningType) -> bool:
        return any(w.type == warning_type.value for w in self.warnings)
