#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from typing import Sequence, Tuple

import numpy as np
from scipy.special import betainc

from emblens.util.errors import PreconditionError, UndefinedCorrelationError


def pearson(x: Sequence[float] | np.ndarray, y: Sequence[float] | np.ndarray) -> Tuple[float, float]:
    """
    Pearson correlation with a two-sided p-value.

    With t = r·sqrt((n − 2) / (1 − r²)) and df = n − 2, the Student-t tail
    P(|T| > |t|) equals the regularized incomplete beta I_{df/(df+t²)}(df/2, 1/2),
    and df / (df + t²) = 1 − r².

    :param x: First sequence.
    :param y: Second sequence.
    :return: (r, p).
    :raises PreconditionError: If lengths differ or n < 3.
    :raises UndefinedCorrelationError: If either sequence is constant or holds non-finite values.
    """
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(y, dtype=np.float64)

    if a.ndim != 1 or a.shape != b.shape:
        raise PreconditionError(f"Pearson needs two equal-length sequences, got {a.shape} and {b.shape}")
    n = a.shape[0]
    if n < 3:
        raise PreconditionError(f"Pearson needs n >= 3, got ({n})")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise UndefinedCorrelationError("Correlation undefined for a series with non-finite values")

    da = a - a.mean()
    db = b - b.mean()
    ss_a = float(np.dot(da, da))
    ss_b = float(np.dot(db, db))
    if ss_a == 0.0 or ss_b == 0.0 or np.all(a == a[0]) or np.all(b == b[0]):
        raise UndefinedCorrelationError("Correlation undefined for a constant series")

    r = float(np.clip(np.dot(da, db) / np.sqrt(ss_a * ss_b), -1.0, 1.0))

    df = n - 2
    p = float(betainc(0.5 * df, 0.5, max(0.0, 1.0 - r * r)))
    if not (np.isfinite(r) and np.isfinite(p)):
        raise UndefinedCorrelationError(f"Correlation undefined: r=({r}), p=({p})")
    return r, min(1.0, max(0.0, p))
