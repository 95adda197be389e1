#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging

import numpy as np

from emblens.data.EmbeddingSet import EmbeddingSet

logger = logging.getLogger(__name__)

FLAG_OUTLIER_SUSPECT = "outlier-suspect"

DEFAULT_OUTLIER_FACTOR = 10.0


def median_distances(e: EmbeddingSet) -> np.ndarray:
    """
    Euclidean distance of every sample from the coordinate-wise median.
    :param e: Embedding set.
    :return: (n,) distances.
    """
    values = e.values.astype(np.float64)
    return np.linalg.norm(values - np.median(values, axis=0), axis=1)


def screen_outliers(e: EmbeddingSet, factor: float = DEFAULT_OUTLIER_FACTOR) -> np.ndarray:
    """
    Indices of samples farther than factor × (median distance) from the coordinate-wise median.

    Far-away samples stretch σ_i and with it the histogram bin widths, so a
    milestone containing any of them is suspect for a low entropy reading.

    :param e: Embedding set.
    :param factor: Distance multiple of the median distance.
    :return: Sorted sample indices (possibly empty).
    """
    distances = median_distances(e)
    scale = float(np.median(distances))
    if scale <= 0.0:
        return np.zeros(0, dtype=np.int64)

    outliers = np.flatnonzero(distances > factor * scale)
    if outliers.size:
        logger.warning(f"Milestone '{e.milestone_id}': ({outliers.size}) outlier sample(s) beyond {factor}x median")
    return outliers
