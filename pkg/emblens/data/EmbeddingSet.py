#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Tuple, Any

import numpy as np

from emblens.util.errors import FormatError


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    """
    Embedding set: n×d matrix of finite sample embeddings, rows in sample order.
    """

    values: np.ndarray

    milestone_id: str = field(default="")

    flags: Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        values = np.array(self.values, copy=True)
        if values.dtype not in (np.float32, np.float64):
            values = values.astype(np.float64)

        if values.ndim != 2:
            raise FormatError(f"Embeddings must be a 2-d matrix, got shape {values.shape}")

        n, d = values.shape
        if n < 1 or d < 1:
            raise FormatError(f"Embeddings need n >= 1 and d >= 1, got ({n}) x ({d})")

        finite = np.isfinite(values)
        if not finite.all():
            row, col = (int(i) for i in np.argwhere(~finite)[0])
            raise FormatError(f"Non-finite embedding entry at row ({row}), column ({col}): {values[row, col]}")

        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "flags", tuple(self.flags))

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def d(self) -> int:
        return int(self.values.shape[1])

    def with_values(self, values: np.ndarray, *flags: str) -> "EmbeddingSet":
        """
        New embedding set with the same milestone id.
        :param values: Replacement matrix (any shape).
        :param flags: Extra flags appended to the existing ones.
        :return: Embedding set.
        """
        return EmbeddingSet(values=values, milestone_id=self.milestone_id, flags=self.flags + tuple(flags))

    def row_norms(self) -> np.ndarray:
        return np.linalg.norm(self.values.astype(np.float64), axis=1)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, EmbeddingSet):
            return NotImplemented
        return (
            self.milestone_id == other.milestone_id
            and self.flags == other.flags
            and self.values.dtype == other.values.dtype
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.milestone_id, self.values.shape, self.values.tobytes()))
