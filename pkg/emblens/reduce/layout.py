#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from functools import lru_cache

import numpy as np
import scipy.sparse
from scipy.optimize import curve_fit
from scipy.spatial.distance import pdist

logger = logging.getLogger(__name__)

# negatives drawn per vertex and epoch, per unit of negative_sample_rate
NEGATIVES_PER_RATE = 4
CHECKPOINT_EVERY = 20
INIT_MAX_COORD = 10.0
INIT_NOISE = 1e-4
REPULSION_EPSILON = 1e-3
PROBABILITY_EPSILON = 1e-12


@lru_cache(maxsize=32)
def find_ab_params(spread: float, min_dist: float) -> tuple[float, float]:
    """
    Fit a, b of the low-dimensional kernel 1 / (1 + a·r^(2b)) to an offset exponential decay.
    :param spread: Effective scale of embedded points.
    :param min_dist: Distance below which the kernel is ~1.
    :return: (a, b).
    """

    def curve(x, a, b):
        return 1.0 / (1.0 + a * x ** (2 * b))

    xv = np.linspace(0, spread * 3, 300)
    yv = np.zeros(xv.shape)
    yv[xv < min_dist] = 1.0
    yv[xv >= min_dist] = np.exp(-(xv[xv >= min_dist] - min_dist) / spread)
    params, _covar = curve_fit(curve, xv, yv)
    return float(params[0]), float(params[1])


def scale_init(coords: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Scale initial coordinates so the largest magnitude is INIT_MAX_COORD, plus tiny seeded noise.
    :param coords: Initial coordinates.
    :param rng: Generator.
    :return: Scaled coordinates.
    """
    coords = np.asarray(coords, dtype=np.float64)
    largest = np.abs(coords).max()
    if largest > 0:
        coords = coords * (INIT_MAX_COORD / largest)
    return coords + rng.normal(scale=INIT_NOISE, size=coords.shape)


def scatter_add(index: np.ndarray, values: np.ndarray, n: int) -> np.ndarray:
    """
    Sum rows of `values` into n buckets by `index`, in a fixed order.
    :param index: (m,) bucket per row.
    :param values: (m, dim) rows.
    :param n: Bucket count.
    :return: (n, dim) sums.
    """
    return np.stack(
        [np.bincount(index, weights=values[:, column], minlength=n) for column in range(values.shape[1])],
        axis=1,
    )


def attraction_coefficients(dist_squared: np.ndarray, a: float, b: float) -> np.ndarray:
    """
    d(−log q)/d(r²) · 2 for the kernel q = 1 / (1 + a·r^(2b)); zero for coincident points.
    """
    result = np.zeros_like(dist_squared)
    positive = dist_squared > 0
    d2 = dist_squared[positive]
    result[positive] = 2.0 * a * b * d2 ** (b - 1.0) / (1.0 + a * d2 ** b)
    return result


def repulsion_coefficients(dist_squared: np.ndarray, a: float, b: float) -> np.ndarray:
    """
    −d(−log(1 − q))/d(r²) · 2, softened by REPULSION_EPSILON at r = 0.
    """
    return 2.0 * b / ((REPULSION_EPSILON + dist_squared) * (1.0 + a * dist_squared ** b))


def optimize_layout(
        init: np.ndarray,
        weights: scipy.sparse.csr_matrix,
        a: float,
        b: float,
        n_epochs: int,
        negative_sample_rate: int,
        rng: np.random.Generator,
        initial_alpha: float = 1.0,
) -> np.ndarray:
    """
    Negative-sampling layout of the fuzzy graph.

    Every epoch pulls each vertex along all its graph edges (weighted by membership)
    and pushes it away from uniformly drawn negative samples. The negatives stand in
    for all n − 1 other vertices, so each one carries weight (n − 1) / (number drawn).
    The step of a vertex is its net force divided by the sum of the force
    coefficients acting on it, so a step never exceeds the spread of the points
    involved; the learning rate decays linearly to zero.

    The cross-entropy is checked every CHECKPOINT_EVERY epochs and the best layout
    seen (the initial one included) is returned.

    :param init: (n, dim) initial coordinates.
    :param weights: Symmetric membership matrix.
    :param a: Kernel parameter a.
    :param b: Kernel parameter b.
    :param n_epochs: Number of epochs.
    :param negative_sample_rate: Scales the negatives drawn per vertex and epoch.
    :param rng: Generator.
    :param initial_alpha: Initial learning rate.
    :return: (n, dim) optimized coordinates.
    """
    embedding = np.array(init, dtype=np.float64, copy=True)
    n = embedding.shape[0]

    graph = weights.tocoo()
    heads = graph.row.astype(np.int64)
    tails = graph.col.astype(np.int64)
    memberships = graph.data.astype(np.float64)

    negatives = negative_sample_rate * NEGATIVES_PER_RATE
    neg_heads = np.repeat(np.arange(n, dtype=np.int64), negatives)
    negative_weight = (n - 1) / float(negatives) if negatives else 0.0

    best = embedding.copy()
    best_loss = layout_cross_entropy(weights, embedding, a, b)
    initial_loss = best_loss

    for epoch in range(n_epochs):
        alpha = initial_alpha * (1.0 - epoch / float(n_epochs))

        # Attraction
        diff = embedding[tails] - embedding[heads]
        strength = memberships * attraction_coefficients(np.einsum("ij,ij->i", diff, diff), a, b)
        force = scatter_add(heads, strength[:, None] * diff, n)
        stiffness = np.bincount(heads, weights=strength, minlength=n)

        # Repulsion
        if negatives:
            # uniform over the other n − 1 vertices
            neg_tails = rng.integers(0, n - 1, size=neg_heads.shape[0])
            neg_tails += neg_tails >= neg_heads

            diff = embedding[neg_heads] - embedding[neg_tails]
            strength = negative_weight * repulsion_coefficients(np.einsum("ij,ij->i", diff, diff), a, b)
            force += scatter_add(neg_heads, strength[:, None] * diff, n)
            stiffness += np.bincount(neg_heads, weights=strength, minlength=n)

        moved = stiffness > 0
        embedding[moved] += alpha * force[moved] / stiffness[moved, None]

        if (epoch + 1) % CHECKPOINT_EVERY == 0 or epoch + 1 == n_epochs:
            loss = layout_cross_entropy(weights, embedding, a, b)
            if loss < best_loss:
                best, best_loss = embedding.copy(), loss

    logger.debug(f"Layout cross-entropy ({initial_loss:.6g}) -> ({best_loss:.6g}) after ({n_epochs}) epochs")
    return best


def layout_cross_entropy(weights: scipy.sparse.csr_matrix, embedding: np.ndarray, a: float, b: float) -> float:
    """
    Fuzzy-set cross-entropy between graph memberships and low-dimensional similarities, over all unordered pairs.

    Split as Σ_pairs −log(1 − q) + Σ_edges w·(log(1 − q) − log q), so only the
    graph edges need their membership looked up.

    :param weights: Symmetric membership matrix.
    :param embedding: (n, dim) coordinates.
    :param a: Kernel parameter a.
    :param b: Kernel parameter b.
    :return: Cross-entropy (nats).
    """
    coords = np.asarray(embedding, dtype=np.float64)

    def similarity(dist_squared: np.ndarray) -> np.ndarray:
        q = 1.0 / (1.0 + a * dist_squared ** b)
        return np.clip(q, PROBABILITY_EPSILON, 1.0 - PROBABILITY_EPSILON)

    total = float(-np.log1p(-similarity(pdist(coords, metric="sqeuclidean"))).sum())

    graph = scipy.sparse.triu(weights, k=1).tocoo()
    diff = coords[graph.row] - coords[graph.col]
    q = similarity(np.einsum("ij,ij->i", diff, diff))
    total += float((graph.data * (np.log1p(-q) - np.log(q))).sum())
    return total
