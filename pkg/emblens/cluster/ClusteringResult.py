#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from emblens.data.Partition import Partition


@dataclass(frozen=True)
class ClusteringResult:
    """
    Clustering result of the best restart.
    """

    partition: Partition

    centroids: np.ndarray

    # Sum of distances to the assigned centroid (Euclidean: not squared)
    objective: float

    # Sum of squared Euclidean distances, or of 1 − cosine; restarts compete on it
    inertia: float

    iterations_run: int

    restart_index: int

    # Inertia after initialization, after every Lloyd iteration, and after the transfers
    history: Tuple[float, ...] = field(default=())
