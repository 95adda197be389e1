#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass, field
from typing import Optional

SIGNIFICANCE_ALPHA = 0.05

POSITIVE = "positive"
NEGATIVE = "negative"
NOT_SIGNIFICANT = "not-significant"
UNDEFINED = "undefined"


def classify(r: Optional[float], p: Optional[float], alpha: float = SIGNIFICANCE_ALPHA) -> str:
    """
    Significance class of a correlation.
    :param r: Pearson r, None if undefined.
    :param p: Two-sided p-value, None if undefined.
    :param alpha: Significance level.
    :return: positive, negative, not-significant or undefined.
    """
    if r is None or p is None:
        return UNDEFINED
    if p >= alpha:
        return NOT_SIGNIFICANT
    return POSITIVE if r > 0 else NEGATIVE


@dataclass(frozen=True)
class Correlation:
    """
    Pearson r and p over n points; r and p are None when undefined.
    """

    r: Optional[float]

    p: Optional[float]

    n: int

    @property
    def significance(self) -> str:
        return classify(self.r, self.p)


@dataclass(frozen=True)
class CorrelationResult:
    """
    Correlation of one metric with the reference, with and without the initialization milestone.
    """

    metric: str

    reference: str

    with_init: Correlation

    without_init: Correlation

    late: Optional[Correlation] = field(default=None)

    @property
    def r_with_init(self) -> Optional[float]:
        return self.with_init.r

    @property
    def r_without_init(self) -> Optional[float]:
        return self.without_init.r

    @property
    def p_with_init(self) -> Optional[float]:
        return self.with_init.p

    @property
    def p_without_init(self) -> Optional[float]:
        return self.without_init.p


@dataclass(frozen=True)
class TrendResult:
    """
    Pearson r of a metric against training progress (epoch, or position when epochs do not vary).
    """

    metric: str

    axis: str

    correlation: Correlation

    @property
    def direction(self) -> str:
        significance = self.correlation.significance
        if significance == POSITIVE:
            return "rising"
        if significance == NEGATIVE:
            return "falling"
        return significance
