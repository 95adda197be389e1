#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field, replace

from emblens.util.errors import ConfigError

DISTANCE_COSINE = "cosine"
DISTANCE_EUCLIDEAN = "euclidean"
DISTANCES = (DISTANCE_COSINE, DISTANCE_EUCLIDEAN)


@dataclass(frozen=True)
class KMeansConfig:
    """
    k-means config; `k` is k_1 at the call site, k_2 = 2 k_1 is derived by `cluster_pair`.
    """

    k: int = field(default=10)

    distance: str = field(default=DISTANCE_COSINE)

    n_restarts: int = field(default=10)

    max_iters: int = field(default=300)

    tol: float = field(default=1e-6)

    seed: int = field(default=0)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got ({self.k})")
        if self.distance not in DISTANCES:
            raise ConfigError(f"Unknown distance '{self.distance}', expected one of {DISTANCES}")
        if self.n_restarts < 1:
            raise ConfigError(f"n_restarts must be >= 1, got ({self.n_restarts})")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got ({self.max_iters})")
        if self.tol < 0:
            raise ConfigError(f"tol must be >= 0, got ({self.tol})")

    def with_k(self, k: int, seed: int) -> "KMeansConfig":
        """
        Same config with another k and seed.
        :param k: k.
        :param seed: Seed.
        :return: Config.
        """
        return replace(self, k=k, seed=seed)
