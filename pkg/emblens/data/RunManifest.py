#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple


@dataclass(frozen=True)
class MilestoneDescriptor:
    """
    Milestone descriptor: where a milestone's files live (paths already resolved).
    """

    id: str

    epoch: int

    embeddings: Path

    labels: Optional[Path] = field(default=None)

    reference_value: Optional[float] = field(default=None)


@dataclass(frozen=True)
class RunManifest:
    """
    Run manifest: ordered milestones plus the raw `settings` block.
    """

    run_id: str

    milestones: Tuple[MilestoneDescriptor, ...]

    settings: Dict[str, Any] = field(default_factory=dict)

    path: Optional[Path] = field(default=None)

    @property
    def has_labels(self) -> bool:
        return any(m.labels is not None for m in self.milestones)

    @property
    def has_reference(self) -> bool:
        return any(m.reference_value is not None for m in self.milestones)
