#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from emblens.util.errors import ConfigError


@dataclass(frozen=True)
class SynthConfig:
    """
    Synthetic trajectory config.

    Milestone i sits at progression t_i (default: evenly spaced over [0, 1]) and
    epoch i · epoch_step; its within-class spread is lerp(within_sigma_start,
    within_sigma_end, t_i).
    """

    n_samples: int = field(default=2000)

    dim: int = field(default=32)

    n_classes: int = field(default=10)

    n_milestones: int = field(default=10)

    epoch_step: int = field(default=20)

    t_schedule: Optional[Tuple[float, ...]] = field(default=None)

    within_sigma_start: float = field(default=6.0)

    within_sigma_end: float = field(default=0.5)

    between_scale: float = field(default=10.0)

    outlier_rates: Optional[Tuple[float, ...]] = field(default=None)

    outlier_radius_factor: float = field(default=50.0)

    seed: int = field(default=0)

    def __post_init__(self) -> None:
        if self.n_samples < 1 or self.dim < 1 or self.n_milestones < 1:
            raise ConfigError("n_samples, dim and n_milestones must be >= 1")
        if self.n_classes < 1:
            raise ConfigError(f"n_classes must be >= 1, got ({self.n_classes})")
        if self.n_classes > self.n_samples:
            raise ConfigError(f"n_classes ({self.n_classes}) exceeds n_samples ({self.n_samples})")
        if self.epoch_step < 1:
            raise ConfigError(f"epoch_step must be >= 1, got ({self.epoch_step})")
        if not 0 < self.within_sigma_end < self.within_sigma_start:
            raise ConfigError(
                f"Need 0 < within_sigma_end < within_sigma_start, "
                f"got ({self.within_sigma_end}) and ({self.within_sigma_start})"
            )
        if self.between_scale <= 0 or self.outlier_radius_factor <= 0:
            raise ConfigError("between_scale and outlier_radius_factor must be > 0")

        if self.t_schedule is not None:
            if len(self.t_schedule) != self.n_milestones:
                raise ConfigError(f"t_schedule needs ({self.n_milestones}) entries, got ({len(self.t_schedule)})")
            if any(not 0.0 <= t <= 1.0 for t in self.t_schedule):
                raise ConfigError("t_schedule entries must lie in [0, 1]")

        if self.outlier_rates is not None:
            if len(self.outlier_rates) != self.n_milestones:
                raise ConfigError(f"outlier_rates needs ({self.n_milestones}) entries, got ({len(self.outlier_rates)})")
            if any(not 0.0 <= rate < 1.0 for rate in self.outlier_rates):
                raise ConfigError("outlier_rates entries must lie in [0, 1)")

    def schedule(self) -> Tuple[float, ...]:
        if self.t_schedule is not None:
            return tuple(float(t) for t in self.t_schedule)
        if self.n_milestones == 1:
            return (1.0,)
        return tuple(float(t) for t in np.linspace(0.0, 1.0, self.n_milestones))

    def rates(self) -> Tuple[float, ...]:
        if self.outlier_rates is not None:
            return tuple(float(rate) for rate in self.outlier_rates)
        return (0.0,) * self.n_milestones

    def sigma(self, t: float) -> float:
        return self.within_sigma_start + (self.within_sigma_end - self.within_sigma_start) * t

    def milestone_id(self, index: int) -> str:
        return f"epoch-{index * self.epoch_step:04d}"
