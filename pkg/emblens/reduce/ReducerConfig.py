#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field

from emblens.util.errors import ConfigError

METHOD_PCA = "pca"
METHOD_NEIGHBOR_GRAPH = "neighbor-graph"
METHODS = (METHOD_PCA, METHOD_NEIGHBOR_GRAPH)


@dataclass(frozen=True)
class ReducerConfig:
    """
    Reducer config.
    """

    method: str = field(default=METHOD_NEIGHBOR_GRAPH)

    target_dim: int = field(default=3)

    n_neighbors: int = field(default=50)

    layout_epochs: int = field(default=200)

    min_dist: float = field(default=0.1)

    spread: float = field(default=1.0)

    negative_sample_rate: int = field(default=5)

    learning_rate: float = field(default=1.0)

    seed: int = field(default=0)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ConfigError(f"Unknown reducer method '{self.method}', expected one of {METHODS}")
        if self.target_dim < 1:
            raise ConfigError(f"target_dim must be >= 1, got ({self.target_dim})")
        if self.n_neighbors < 2:
            raise ConfigError(f"n_neighbors must be >= 2, got ({self.n_neighbors})")
        if self.layout_epochs < 1:
            raise ConfigError(f"layout_epochs must be >= 1, got ({self.layout_epochs})")
        if self.min_dist < 0:
            raise ConfigError(f"min_dist must be >= 0, got ({self.min_dist})")
        if self.spread <= 0 or self.min_dist >= self.spread:
            raise ConfigError(f"Need 0 <= min_dist < spread, got min_dist=({self.min_dist}), spread=({self.spread})")
        if self.negative_sample_rate < 0:
            raise ConfigError(f"negative_sample_rate must be >= 0, got ({self.negative_sample_rate})")
