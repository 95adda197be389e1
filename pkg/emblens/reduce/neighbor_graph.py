#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse
from scipy.spatial.distance import cdist

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.util.errors import PreconditionError

logger = logging.getLogger(__name__)

SMOOTH_K_TOLERANCE = 1e-5
MIN_K_DIST_SCALE = 1e-3
BISECTION_MAX_ITERS = 200


@dataclass(frozen=True)
class NeighborGraph:
    """
    Exact k-NN graph with fuzzy memberships.
    """

    indices: np.ndarray  # (n, k) neighbour indices, self excluded, ascending distance

    distances: np.ndarray  # (n, k)

    sigmas: np.ndarray  # (n,) smoothing scale σ

    rhos: np.ndarray  # (n,) connection floor ρ

    weights: scipy.sparse.csr_matrix  # (n, n) symmetrized memberships in (0, 1]

    @property
    def n(self) -> int:
        return int(self.indices.shape[0])

    @property
    def n_neighbors(self) -> int:
        return int(self.indices.shape[1])


def exact_knn(values: np.ndarray, n_neighbors: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Brute-force k nearest neighbours by Euclidean distance, self excluded.

    Ties are broken by lower sample index.

    :param values: (n, d) matrix.
    :param n_neighbors: Neighbours per sample.
    :return: (indices, distances), both (n, n_neighbors).
    """
    values = np.asarray(values, dtype=np.float64)
    distances = cdist(values, values, metric="euclidean")
    np.fill_diagonal(distances, np.inf)

    indices = np.argsort(distances, axis=1, kind="stable")[:, :n_neighbors]
    return indices, np.take_along_axis(distances, indices, axis=1)


def smooth_knn_dist(distances: np.ndarray, n_neighbors: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Per-sample ρ and σ.

    ρ_i is the distance to the nearest neighbour; σ_i solves
    Σ_j exp(−max(0, d_ij − ρ_i) / σ_i) = log2(n_neighbors) by bisection, all rows at once.

    :param distances: (n, k) ascending neighbour distances.
    :param n_neighbors: k.
    :return: (sigmas, rhos).
    """
    n = distances.shape[0]
    target = np.log2(n_neighbors)
    rhos = distances[:, 0].copy()
    shifted = np.maximum(distances - rhos[:, None], 0.0)

    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    mid = np.ones(n)
    active = np.ones(n, dtype=bool)

    for _ in range(BISECTION_MAX_ITERS):
        if not active.any():
            break

        psum = np.exp(-shifted[active] / mid[active, None]).sum(axis=1)

        rows = np.flatnonzero(active)
        too_big = psum > target

        hi[rows[too_big]] = mid[rows[too_big]]
        lo[rows[~too_big]] = mid[rows[~too_big]]

        bounded = np.isfinite(hi[rows])
        new_mid = np.where(bounded, (lo[rows] + hi[rows]) / 2.0, mid[rows] * 2.0)

        converged = (np.abs(psum - target) < SMOOTH_K_TOLERANCE * target) | (
            bounded & (hi[rows] - lo[rows] <= SMOOTH_K_TOLERANCE * new_mid)
        )
        mid[rows] = new_mid
        active[rows[converged]] = False

    # Rows where no σ reaches the target (many ties at ρ) collapse towards 0; floor them.
    mean_distances = distances.mean(axis=1)
    floor = MIN_K_DIST_SCALE * np.where(rhos > 0, mean_distances, np.mean(distances))
    sigmas = np.maximum(mid, floor)
    sigmas = np.where(sigmas > 0, sigmas, MIN_K_DIST_SCALE)

    return sigmas, rhos


def fuzzy_membership(indices: np.ndarray, distances: np.ndarray, sigmas: np.ndarray,
                     rhos: np.ndarray) -> scipy.sparse.csr_matrix:
    """
    Symmetrized membership matrix, w = a + b − a·b.
    :param indices: (n, k) neighbour indices.
    :param distances: (n, k) neighbour distances.
    :param sigmas: (n,) σ.
    :param rhos: (n,) ρ.
    :return: Sparse (n, n) matrix with entries in (0, 1].
    """
    n, k = indices.shape
    strengths = np.exp(-np.maximum(distances - rhos[:, None], 0.0) / sigmas[:, None])

    rows = np.repeat(np.arange(n), k)
    directed = scipy.sparse.csr_matrix((strengths.ravel(), (rows, indices.ravel())), shape=(n, n))
    transposed = directed.T.tocsr()

    weights = directed + transposed - directed.multiply(transposed)
    weights = weights.tocsr()
    weights.eliminate_zeros()
    weights.sort_indices()
    return weights


def build_neighbor_graph(e: EmbeddingSet, n_neighbors: int) -> NeighborGraph:
    """
    Build the exact k-NN graph with fuzzy memberships.
    :param e: Embedding set.
    :param n_neighbors: Neighbours per sample.
    :return: Neighbour graph.
    :raises PreconditionError: If n_neighbors >= n.
    """
    if n_neighbors >= e.n:
        raise PreconditionError(f"n_neighbors ({n_neighbors}) must be < n ({e.n})")

    indices, distances = exact_knn(e.values, n_neighbors)
    sigmas, rhos = smooth_knn_dist(distances, n_neighbors)
    weights = fuzzy_membership(indices, distances, sigmas, rhos)

    logger.debug(f"Neighbour graph for '{e.milestone_id}': ({weights.nnz}) edge(s), k=({n_neighbors})")

    return NeighborGraph(indices=indices, distances=distances, sigmas=sigmas, rhos=rhos, weights=weights)
