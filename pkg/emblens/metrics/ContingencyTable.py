#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass

import numpy as np

from emblens.util.errors import PreconditionError


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """
    Joint counts of two partitions; counts / n is the joint distribution P(x, y).
    """

    counts: np.ndarray

    def __post_init__(self) -> None:
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        if counts.ndim != 2:
            raise PreconditionError(f"Contingency counts must be 2-d, got shape {counts.shape}")
        if (counts < 0).any():
            raise PreconditionError("Contingency counts must be non-negative")
        if counts.sum() < 1:
            raise PreconditionError("Contingency table must hold at least one sample")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def column_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.counts.T)
