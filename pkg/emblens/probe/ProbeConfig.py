#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field, replace

from emblens.util.errors import ConfigError

KIND_KNN = "knn"
KIND_LINEAR = "linear"
KINDS = (KIND_KNN, KIND_LINEAR)


@dataclass(frozen=True)
class ProbeConfig:
    """
    Probe config.
    """

    kind: str = field(default=KIND_LINEAR)

    knn_k: int = field(default=20)

    train_fraction: float = field(default=0.5)

    epochs: int = field(default=200)

    learning_rate: float = field(default=0.5)

    l2: float = field(default=1e-4)

    seed: int = field(default=0)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"Unknown probe kind '{self.kind}', expected one of {KINDS}")
        if self.knn_k < 1:
            raise ConfigError(f"knn_k must be >= 1, got ({self.knn_k})")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction must be in (0, 1), got ({self.train_fraction})")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got ({self.epochs})")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got ({self.learning_rate})")
        if self.l2 < 0:
            raise ConfigError(f"l2 must be >= 0, got ({self.l2})")

    def as_kind(self, kind: str) -> "ProbeConfig":
        return replace(self, kind=kind)
