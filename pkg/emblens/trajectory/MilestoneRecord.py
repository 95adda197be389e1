#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

STATUS_OK = "ok"
STATUS_FAILED = "failed"


@dataclass(frozen=True)
class MilestoneRecord:
    """
    Metric values of one milestone, with the reducer that ran and the component seeds used.
    """

    milestone_id: str

    epoch: int

    status: str = field(default=STATUS_OK)

    error: Optional[str] = field(default=None)

    reducer: Optional[str] = field(default=None)

    seeds: Dict[str, int] = field(default_factory=dict)

    values: Dict[str, float] = field(default_factory=dict)

    flags: Dict[str, Tuple[str, ...]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    def value(self, metric: str) -> Optional[float]:
        return self.values.get(metric)

    def flags_of(self, metric: str) -> Tuple[str, ...]:
        return self.flags.get(metric, ())
