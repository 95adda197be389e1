#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from emblens.util.errors import ConfigError

ORIGIN_DATA_MIN = "data-min"


@dataclass(frozen=True)
class HistogramSpec:
    """
    Histogram spec: bin width l_i = sigma_factor · σ_i, origin at the per-dimension data minimum.
    """

    sigma_factor: float = field(default=0.4)

    dimensions: int = field(default=3)

    origin: str = field(default=ORIGIN_DATA_MIN)

    def __post_init__(self) -> None:
        if not self.sigma_factor > 0:
            raise ConfigError(f"sigma_factor must be > 0, got ({self.sigma_factor})")
        if self.dimensions < 1:
            raise ConfigError(f"dimensions must be >= 1, got ({self.dimensions})")
        if self.origin != ORIGIN_DATA_MIN:
            raise ConfigError(f"Unknown origin rule '{self.origin}'")


@dataclass(frozen=True, eq=False)
class HistogramGrid:
    """
    Sparse histogram: occupied bins only.
    """

    bins: np.ndarray  # (m, kept dims) integer bin coordinates, lexicographically sorted

    counts: np.ndarray  # (m,) counts >= 1

    widths: np.ndarray  # (kept dims,) bin widths > 0

    origins: np.ndarray  # (kept dims,)

    kept_dimensions: Tuple[int, ...]  # input dimensions used for binning

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def occupied(self) -> int:
        return int(self.counts.shape[0])

    def as_dict(self) -> Dict[Tuple[int, ...], int]:
        return {tuple(int(i) for i in row): int(count) for row, count in zip(self.bins, self.counts)}

    def probabilities(self) -> np.ndarray:
        return self.counts / float(self.n)
