#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class MilestoneRecordSchema(BaseModel):
    id: str
    epoch: int = Field(ge=0)
    status: str
    error: Optional[str] = None
    reducer: Optional[str] = None
    seeds: Dict[str, int] = Field(default_factory=dict)
    metrics: Dict[str, float] = Field(default_factory=dict)
    flags: Dict[str, List[str]] = Field(default_factory=dict)

    model_config = ConfigDict(extra='forbid')  # Ensures additionalProperties: false


class SeriesSchema(BaseModel):
    metric: str
    values: List[Optional[float]]
    flags: List[List[str]]

    model_config = ConfigDict(extra='forbid')  # Ensures additionalProperties: false


class CorrelationSchema(BaseModel):
    r: Optional[float] = Field(default=None, ge=-1.0, le=1.0)
    p: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    n: int = Field(ge=0)
    significance: str

    model_config = ConfigDict(extra='forbid')  # Ensures additionalProperties: false


class CorrelationResultSchema(BaseModel):
    metric: str
    reference: str
    with_init: CorrelationSchema
    without_init: CorrelationSchema
    late: Optional[CorrelationSchema] = None

    model_config = ConfigDict(extra='forbid')  # Ensures additionalProperties: false


class TrendSchema(BaseModel):
    metric: str
    axis: str
    direction: str
    correlation: CorrelationSchema

    model_config = ConfigDict(extra='forbid')  # Ensures additionalProperties: false


class ReportSchema(BaseModel):
    report_version: int
    run_id: str
    manifest: Optional[str] = None
    settings: Dict[str, Any]
    k2: int
    reference_requested: str
    reference_source: Optional[str] = None
    milestones: List[MilestoneRecordSchema]
    series: List[SeriesSchema]
    correlations: List[CorrelationResultSchema] = Field(default_factory=list)
    trends: List[TrendSchema] = Field(default_factory=list)

    model_config = ConfigDict(extra='forbid')  # Ensures additionalProperties: false
