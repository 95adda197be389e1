#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Optional

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.util.errors import FormatError


@dataclass(frozen=True)
class Milestone:
    """
    Milestone: embeddings dumped at one training checkpoint; epoch 0 is the initialization.
    """

    id: str

    epoch: int

    embeddings: EmbeddingSet

    ground_truth: Optional[Partition] = field(default=None)

    reference_value: Optional[float] = field(default=None)

    def __post_init__(self) -> None:
        if self.epoch < 0:
            raise FormatError(f"Milestone '{self.id}' has negative epoch ({self.epoch})")

        if self.ground_truth is not None and self.ground_truth.n != self.embeddings.n:
            raise FormatError(
                f"Milestone '{self.id}': ({self.ground_truth.n}) labels for ({self.embeddings.n}) embeddings"
            )

    @property
    def is_init(self) -> bool:
        return self.epoch == 0
