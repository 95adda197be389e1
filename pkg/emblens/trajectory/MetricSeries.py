#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

AMI_GT = "ami_gt"
CLUSTERING_AGREEMENT = "clustering_agreement"
SILHOUETTE_GT = "silhouette_gt"
SILHOUETTE_C1 = "silhouette_c1"
HISTOGRAM_ENTROPY = "histogram_entropy"
KNN_PROBE = "knn_probe"
LINEAR_PROBE = "linear_probe"
REFERENCE = "reference"

# Report order
METRICS = (
    AMI_GT,
    CLUSTERING_AGREEMENT,
    SILHOUETTE_GT,
    SILHOUETTE_C1,
    HISTOGRAM_ENTROPY,
    KNN_PROBE,
    LINEAR_PROBE,
    REFERENCE,
)

LABEL_FREE_METRICS = (CLUSTERING_AGREEMENT, HISTOGRAM_ENTROPY, SILHOUETTE_C1)


@dataclass(frozen=True)
class MetricSeries:
    """
    One metric across the milestones of a run, in manifest order; None marks a missing value.
    """

    metric: str

    milestone_ids: Tuple[str, ...]

    epochs: Tuple[int, ...]

    values: Tuple[Optional[float], ...]

    flags: Tuple[Tuple[str, ...], ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.flags:
            object.__setattr__(self, "flags", tuple(() for _ in self.values))
        if not len(self.milestone_ids) == len(self.epochs) == len(self.values) == len(self.flags):
            raise ValueError(f"Series '{self.metric}' has misaligned fields")

    def __len__(self) -> int:
        return len(self.values)

    def complete(self, mask: Optional[Sequence[bool]] = None) -> bool:
        """
        Whether every milestone selected by the mask has a value; an empty selection is never complete.
        :param mask: Per-milestone selection; all milestones when omitted.
        :return: Completeness.
        """
        mask = mask if mask is not None else [True] * len(self.values)
        return any(mask) and all(value is not None for value, use in zip(self.values, mask) if use)

    def renamed(self, metric: str) -> "MetricSeries":
        return MetricSeries(metric, self.milestone_ids, self.epochs, self.values, self.flags)
