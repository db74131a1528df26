"""Run manifest written next to every command's outputs."""
from typing import ClassVar, Dict, List, Tuple

from pydantic import BaseModel, Field

from app.config import SCHEMA_VERSION, TOOL_VERSION


class RunManifest(BaseModel):
    schema_version: str = SCHEMA_VERSION
    command: str
    config_digest: str
    input_digests: Dict[str, str] = Field(default_factory=dict)
    seed: int
    tool_version: str = TOOL_VERSION
    output_paths: List[str] = Field(default_factory=list)
    wall_clock_seconds: float = Field(default=0.0, ge=0.0)

    # Excluded when comparing reruns
    VOLATILE_FIELDS: ClassVar[Tuple[str, ...]] = ("wall_clock_seconds",)

    def stable_dump(self) -> dict:
        return self.model_dump(exclude=set(self.VOLATILE_FIELDS))
