#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from emblens.util.errors import FormatError


@dataclass(frozen=True, eq=False)
class Partition:
    """
    Partition: assignment of n samples to labels in [0, k); empty labels are allowed.
    """

    assignments: np.ndarray

    k: int

    def __post_init__(self) -> None:
        assignments = np.array(self.assignments, copy=True)

        if assignments.ndim != 1 or assignments.shape[0] < 1:
            raise FormatError(f"Partition must be a non-empty 1-d sequence, got shape {assignments.shape}")

        if not np.issubdtype(assignments.dtype, np.integer):
            if not np.all(np.equal(np.mod(assignments, 1), 0)):
                raise FormatError("Partition labels must be integers")
        assignments = assignments.astype(np.int64)

        k = int(self.k)
        if k < 1:
            raise FormatError(f"Partition k must be >= 1, got ({k})")

        if assignments.min() < 0:
            raise FormatError(f"Negative label ({int(assignments.min())}) in partition")

        if assignments.max() >= k:
            raise FormatError(f"Label ({int(assignments.max())}) out of range for k=({k})")

        assignments.setflags(write=False)
        object.__setattr__(self, "assignments", assignments)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_labels(cls, labels: Sequence[int] | np.ndarray, k: Optional[int] = None) -> "Partition":
        """
        Build partition from labels.
        :param labels: Non-negative integer labels.
        :param k: Label count; defaults to max label + 1.
        :return: Partition.
        """
        array = np.asarray(labels)
        if array.size == 0:
            raise FormatError("Partition must not be empty")
        if k is None:
            k = int(array.max()) + 1
        return cls(assignments=array, k=k)

    @property
    def n(self) -> int:
        return int(self.assignments.shape[0])

    def counts(self) -> np.ndarray:
        """
        Samples per label.
        :return: Array of length k.
        """
        return np.bincount(self.assignments, minlength=self.k)

    def non_empty(self) -> int:
        """
        Number of labels that occur.
        :return: Count.
        """
        return int(np.count_nonzero(self.counts()))

    def same_structure(self, other: "Partition") -> bool:
        """
        Whether both partitions group samples identically (equal up to relabeling).
        :param other: Other partition.
        :return: True if identical up to a bijective relabeling.
        """
        if self.n != other.n:
            return False
        pairs = np.unique(np.stack([self.assignments, other.assignments], axis=1), axis=0)
        return (
            len(pairs) == len(np.unique(self.assignments))
            and len(pairs) == len(np.unique(other.assignments))
        )

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.assignments, other.assignments)

    def __hash__(self) -> int:
        return hash((self.k, self.assignments.tobytes()))
