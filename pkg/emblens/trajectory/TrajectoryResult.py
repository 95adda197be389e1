#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Optional, Tuple

from emblens.config.EvalSettings import EvalSettings
from emblens.trajectory.CorrelationResult import CorrelationResult, TrendResult
from emblens.trajectory.MetricSeries import MetricSeries
from emblens.trajectory.MilestoneRecord import MilestoneRecord


@dataclass(frozen=True)
class TrajectoryResult:
    """
    Everything a report holds: settings, per-milestone records, series, correlations and trends.
    """

    run_id: str

    manifest: Optional[str]

    settings: EvalSettings

    records: Tuple[MilestoneRecord, ...]

    series: Tuple[MetricSeries, ...] = field(default=())

    reference_source: Optional[str] = field(default=None)

    correlations: Tuple[CorrelationResult, ...] = field(default=())

    trends: Tuple[TrendResult, ...] = field(default=())

    @property
    def failures(self) -> Tuple[MilestoneRecord, ...]:
        return tuple(record for record in self.records if not record.ok)

    def series_of(self, metric: str) -> Optional[MetricSeries]:
        for series in self.series:
            if series.metric == metric:
                return series
        return None

    def correlation_of(self, metric: str) -> Optional[CorrelationResult]:
        for correlation in self.correlations:
            if correlation.metric == metric:
                return correlation
        return None
