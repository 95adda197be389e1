#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from dataclasses import dataclass

import numpy as np

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.util.errors import PreconditionError

logger = logging.getLogger(__name__)

FLAG_RANK_DEFICIENT = "pca-rank-deficient"

# Relative eigenvalue threshold below which a component counts as degenerate
RANK_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PcaResult:
    """
    PCA result.
    """

    components: np.ndarray  # (target_dim, d), rows are unit projection directions

    explained_variance: np.ndarray  # (target_dim,)

    explained_variance_ratio: np.ndarray  # (target_dim,)

    mean: np.ndarray  # (d,)

    rank_deficient: bool

    def transform(self, values: np.ndarray) -> np.ndarray:
        return (np.asarray(values, dtype=np.float64) - self.mean) @ self.components.T


def pca_fit(e: EmbeddingSet, target_dim: int) -> PcaResult:
    """
    Fit PCA by eigendecomposition of the covariance matrix.

    Components are ordered by decreasing eigenvalue; within each component
    the entry of largest magnitude is made non-negative.

    :param e: Embedding set.
    :param target_dim: Number of components.
    :return: PCA result.
    :raises PreconditionError: If target_dim is outside [1, min(n, d)].
    """
    if not 1 <= target_dim <= min(e.n, e.d):
        raise PreconditionError(f"PCA target_dim ({target_dim}) must be in [1, min(n={e.n}, d={e.d})]")

    values = e.values.astype(np.float64)
    mean = values.mean(axis=0)
    centered = values - mean

    covariance = centered.T @ centered / e.n
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)

    # eigh returns ascending order; stable sort keeps ties deterministic
    order = np.argsort(-eigenvalues, kind="stable")[:target_dim]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    components = eigenvectors[:, order].T.copy()

    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0

    total = float(np.clip(np.linalg.eigvalsh(covariance), 0.0, None).sum())
    ratio = eigenvalues / total if total > 0 else np.zeros_like(eigenvalues)

    top = float(eigenvalues[0]) if eigenvalues.size else 0.0
    rank_deficient = bool(np.any(eigenvalues <= RANK_TOLERANCE * max(top, 1e-300)))
    if rank_deficient:
        logger.warning(
            f"PCA on '{e.milestone_id}': covariance rank below target_dim ({target_dim}), "
            f"trailing components are an orthonormal completion"
        )

    return PcaResult(
        components=components,
        explained_variance=eigenvalues,
        explained_variance_ratio=ratio,
        mean=mean,
        rank_deficient=rank_deficient,
    )


def pca_fit_transform(e: EmbeddingSet, target_dim: int) -> EmbeddingSet:
    """
    Project mean-centered embeddings onto the leading principal components.
    :param e: Embedding set.
    :param target_dim: Output dimensionality.
    :return: n×target_dim embedding set (flagged if the covariance was rank-deficient).
    """
    result = pca_fit(e, target_dim)
    flags = (FLAG_RANK_DEFICIENT,) if result.rank_deficient else ()
    return e.with_values(result.transform(e.values), *flags)
