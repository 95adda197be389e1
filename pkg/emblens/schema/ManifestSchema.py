#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from typing import List, Optional, Dict, Any

from pydantic import BaseModel, ConfigDict, Field


class MilestoneSchema(BaseModel):
    id: str = Field(min_length=1)
    epoch: int = Field(ge=0)
    embeddings: str = Field(min_length=1)
    labels: Optional[str] = None
    reference_value: Optional[float] = Field(default=None, allow_inf_nan=False)

    model_config = ConfigDict(extra='forbid')  # Ensures additionalProperties: false


class ManifestSchema(BaseModel):
    manifest_version: int
    run_id: str = Field(min_length=1)
    milestones: List[MilestoneSchema]
    settings: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(extra='forbid')  # Ensures additionalProperties: false
