#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from emblens.cluster.ClusteringResult import ClusteringResult
from emblens.cluster.KMeansConfig import KMeansConfig, DISTANCE_COSINE
from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.util.errors import PreconditionError
from emblens.util.seed import derive_seed

logger = logging.getLogger(__name__)

ZERO_NORM = 1e-12

# relative to the total squared norm of the points
TRANSFER_EPSILON = 1e-12


def prepare_points(e: EmbeddingSet, distance: str) -> np.ndarray:
    """
    Points in the space k-means runs in (unit vectors for cosine).
    :param e: Embedding set.
    :param distance: Distance name.
    :return: (n, d) float64 matrix.
    :raises PreconditionError: If a row has zero norm under cosine distance.
    """
    points = e.values.astype(np.float64)
    if distance != DISTANCE_COSINE:
        return points

    norms = np.linalg.norm(points, axis=1)
    zero = np.flatnonzero(norms <= ZERO_NORM)
    if zero.size:
        raise PreconditionError(
            f"Zero-norm row ({int(zero[0])}) in '{e.milestone_id}' cannot be clustered under cosine distance"
        )
    return points / norms[:, None]


def point_distances(points: np.ndarray, centroids: np.ndarray, distance: str) -> np.ndarray:
    """
    Distance of every point to every centroid: 1 − cosine for unit vectors, squared Euclidean otherwise.
    :param points: (n, d) points.
    :param centroids: (k, d) centroids.
    :param distance: Distance name.
    :return: (n, k) distances.
    """
    if distance == DISTANCE_COSINE:
        return np.clip(1.0 - points @ centroids.T, 0.0, None)
    return cdist(points, centroids, metric="sqeuclidean")


def assign(points: np.ndarray, centroids: np.ndarray, distance: str) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nearest-centroid assignment; ties go to the lowest centroid index.
    :param points: Points.
    :param centroids: Centroids.
    :param distance: Distance name.
    :return: (labels, distance of each point to its centroid).
    """
    distances = point_distances(points, centroids, distance)
    labels = np.argmin(distances, axis=1)
    return labels, distances[np.arange(points.shape[0]), labels]


def update_centroids(points: np.ndarray, labels: np.ndarray, centroids: np.ndarray, distance: str) -> np.ndarray:
    """
    Centroid update: mean (Euclidean) or normalized mean (cosine); a cluster whose
    normalized mean is undefined keeps its previous centroid.
    :param points: Points.
    :param labels: Labels.
    :param centroids: Previous centroids.
    :param distance: Distance name.
    :return: New centroids.
    """
    k = centroids.shape[0]
    sums = cluster_sums(points, labels, k)
    counts = np.bincount(labels, minlength=k)

    updated = centroids.copy()
    filled = counts > 0
    updated[filled] = sums[filled] / counts[filled, None]

    if distance == DISTANCE_COSINE:
        norms = np.linalg.norm(updated, axis=1)
        ok = filled & (norms > ZERO_NORM)
        updated[ok] = updated[ok] / norms[ok, None]
        updated[~ok] = centroids[~ok]

    return updated


def empty_cluster_repair(
        points: np.ndarray,
        labels: np.ndarray,
        centroids: np.ndarray,
        distance: str,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Give each empty cluster the sample farthest from its centroid.

    Empty clusters are processed in increasing index order; the seized sample
    becomes the cluster's centroid, so the objective never increases. Samples
    that are alone in their cluster are never seized.

    :param points: Points.
    :param labels: Labels after an assignment step.
    :param centroids: Centroids used for that assignment.
    :param distance: Distance name.
    :return: (repaired labels, centroids with relocated entries).
    """
    k = centroids.shape[0]
    labels = labels.copy()
    centroids = centroids.copy()

    counts = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(counts == 0)
    if empty.size == 0:
        return labels, centroids

    assigned = point_distances(points, centroids, distance)[np.arange(points.shape[0]), labels]

    for cluster in empty:
        movable = counts[labels] > 1
        candidates = np.where(movable, assigned, -np.inf)
        sample = int(np.argmax(candidates))
        if not movable[sample]:
            break

        counts[labels[sample]] -= 1
        counts[cluster] += 1
        labels[sample] = cluster
        centroids[cluster] = points[sample]
        assigned[sample] = 0.0

    logger.debug(f"Repaired ({empty.size}) empty cluster(s)")
    return labels, centroids


def inertia(points: np.ndarray, labels: np.ndarray, centroids: np.ndarray, distance: str) -> float:
    """
    The quantity Lloyd iterations minimize: sum of squared Euclidean distances, or of 1 − cosine.
    :param points: Points.
    :param labels: Labels.
    :param centroids: Centroids.
    :param distance: Distance name.
    :return: Inertia.
    """
    distances = point_distances(points, centroids, distance)
    return float(distances[np.arange(points.shape[0]), labels].sum())


def objective(points: np.ndarray, labels: np.ndarray, centroids: np.ndarray, distance: str) -> float:
    """
    Sum over samples of the distance to the assigned centroid (Euclidean distance, not squared).
    :param points: Points.
    :param labels: Labels.
    :param centroids: Centroids.
    :param distance: Distance name.
    :return: Objective.
    """
    if distance == DISTANCE_COSINE:
        return inertia(points, labels, centroids, distance)
    return float(np.linalg.norm(points - centroids[labels], axis=1).sum())


def cluster_sums(points: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    sums = np.zeros((k, points.shape[1]))
    for column in range(points.shape[1]):
        sums[:, column] = np.bincount(labels, weights=points[:, column], minlength=k)
    return sums


def transfer_gains(
        points: np.ndarray,
        labels: np.ndarray,
        sums: np.ndarray,
        counts: np.ndarray,
        distance: str,
) -> np.ndarray:
    """
    Decrease of the inertia when each point moves alone to each other cluster.

    Euclidean: n_a/(n_a − 1)·|x − c_a|² − n_b/(n_b + 1)·|x − c_b|².
    Cosine (cluster cost n_c − |S_c|): |S_a − x| + |S_b + x| − |S_a| − |S_b|.
    Points alone in their cluster and moves to the own cluster get −inf.

    :param points: (m, d) points.
    :param labels: (m,) current cluster of each point.
    :param sums: (k, d) per-cluster sums over all samples.
    :param counts: (k,) per-cluster sizes.
    :param distance: Distance name.
    :return: (m, k) gains.
    """
    rows = np.arange(points.shape[0])
    own = counts[labels].astype(np.float64)

    if distance == DISTANCE_COSINE:
        norms = np.linalg.norm(sums, axis=1)
        dots = points @ sums.T
        squared = np.einsum("ij,ij->i", points, points)
        joined = np.sqrt(np.clip(norms[None, :] ** 2 + 2.0 * dots + squared[:, None], 0.0, None))
        left = np.sqrt(np.clip(norms[labels] ** 2 - 2.0 * dots[rows, labels] + squared, 0.0, None))
        gains = (left - norms[labels])[:, None] + joined - norms[None, :]
    else:
        filled = np.maximum(counts, 1)[:, None]
        distances = cdist(points, sums / filled, metric="sqeuclidean")
        removal = np.zeros_like(own)
        movable = own > 1
        removal[movable] = own[movable] / (own[movable] - 1.0) * distances[rows[movable], labels[movable]]
        gains = removal[:, None] - counts[None, :] / (counts[None, :] + 1.0) * distances

    gains[rows, labels] = -np.inf
    gains[own <= 1, :] = -np.inf
    return gains


def refine_transfers(
        points: np.ndarray,
        labels: np.ndarray,
        k: int,
        distance: str,
        max_passes: int,
) -> Tuple[np.ndarray, int]:
    """
    Single-point transfers after Lloyd convergence: a point moves to another cluster
    whenever that lowers the inertia once both centroids are updated. A partition
    with no improving transfer is also a Lloyd fixed point.

    Each pass screens all points against the current cluster sums, then applies the
    candidates in index order, re-checking each against the sums as they change.

    :param points: Prepared points.
    :param labels: Labels (no empty cluster).
    :param k: Cluster count.
    :param distance: Distance name.
    :param max_passes: Pass limit.
    :return: (labels, number of transfers).
    """
    labels = labels.copy()
    sums = cluster_sums(points, labels, k)
    counts = np.bincount(labels, minlength=k)
    threshold = TRANSFER_EPSILON * max(1.0, float(np.einsum("ij,ij->", points, points)))

    moved = 0
    for _ in range(max_passes):
        gains = transfer_gains(points, labels, sums, counts, distance)
        candidates = np.flatnonzero(gains.max(axis=1) > threshold)
        if candidates.size == 0:
            break

        for i in candidates:
            gain = transfer_gains(points[[i]], labels[[i]], sums, counts, distance)[0]
            target = int(np.argmax(gain))
            if gain[target] <= threshold:
                continue
            source = int(labels[i])
            sums[source] -= points[i]
            sums[target] += points[i]
            counts[source] -= 1
            counts[target] += 1
            labels[i] = target
            moved += 1

    return labels, moved


def kmeans_plusplus(points: np.ndarray, k: int, distance: str, rng: np.random.Generator) -> np.ndarray:
    """
    k-means++ seeding: each new centroid is drawn with probability proportional to
    the distance to the nearest centroid chosen so far.
    :param points: Points.
    :param k: Number of centroids.
    :param distance: Distance name.
    :param rng: Generator.
    :return: (k, d) initial centroids.
    """
    n = points.shape[0]
    chosen: List[int] = [int(rng.integers(n))]
    closest = point_distances(points, points[chosen], distance)[:, 0]

    while len(chosen) < k:
        weights = closest.copy()
        weights[chosen] = 0.0
        total = weights.sum()
        if total > 0:
            index = int(rng.choice(n, p=weights / total))
        else:
            remaining = np.setdiff1d(np.arange(n), chosen)
            index = int(rng.choice(remaining))
        chosen.append(index)
        closest = np.minimum(closest, point_distances(points, points[[index]], distance)[:, 0])

    return points[chosen].copy()


def lloyd(
        points: np.ndarray,
        cfg: KMeansConfig,
        rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray, int, List[float]]:
    """
    One restart: seeding, Lloyd iterations until the relative inertia change is below tol,
    then single-point transfers.
    :param points: Prepared points.
    :param cfg: k-means config.
    :param rng: Generator of this restart.
    :return: (labels, centroids, iterations run, inertia history).
    """
    centroids = kmeans_plusplus(points, cfg.k, cfg.distance, rng)
    labels, _ = assign(points, centroids, cfg.distance)
    labels, centroids = empty_cluster_repair(points, labels, centroids, cfg.distance)

    current = inertia(points, labels, centroids, cfg.distance)
    history = [current]

    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        new_centroids = update_centroids(points, labels, centroids, cfg.distance)
        new_labels, _ = assign(points, new_centroids, cfg.distance)
        new_labels, new_centroids = empty_cluster_repair(points, new_labels, new_centroids, cfg.distance)

        updated = inertia(points, new_labels, new_centroids, cfg.distance)
        history.append(updated)

        unchanged = np.array_equal(new_labels, labels)
        small_change = abs(current - updated) <= cfg.tol * max(abs(current), ZERO_NORM)

        labels, centroids, current = new_labels, new_centroids, updated
        if unchanged or small_change:
            break

    labels, moved = refine_transfers(points, labels, cfg.k, cfg.distance, cfg.max_iters)
    centroids = update_centroids(points, labels, centroids, cfg.distance)
    history.append(inertia(points, labels, centroids, cfg.distance))
    if moved:
        logger.debug(f"Transferred ({moved}) sample(s) after ({iterations}) Lloyd iteration(s)")

    final_labels, _ = assign(points, centroids, cfg.distance)
    if np.bincount(final_labels, minlength=cfg.k).min() > 0:
        labels = final_labels

    return labels, centroids, iterations, history


def kmeans(e: EmbeddingSet, cfg: KMeansConfig) -> ClusteringResult:
    """
    k-means with k-means++ seeding, best inertia over cfg.n_restarts restarts.

    Restart r draws from the generator seeded with (cfg.seed, r). Under cosine
    distance samples and centroids are unit vectors and the distance is
    1 − cosine similarity. Under Euclidean distance the iterations minimize squared
    distances, while the reported objective sums the plain distances.

    :param e: Embedding set.
    :param cfg: k-means config.
    :return: Clustering result.
    :raises PreconditionError: If k > n or a row has zero norm under cosine distance.
    """
    if cfg.k > e.n:
        raise PreconditionError(f"k ({cfg.k}) must be <= n ({e.n})")

    points = prepare_points(e, cfg.distance)

    best: Optional[ClusteringResult] = None
    for restart in range(cfg.n_restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        labels, centroids, iterations, history = lloyd(points, cfg, rng)
        value = inertia(points, labels, centroids, cfg.distance)

        if best is None or value < best.inertia:
            best = ClusteringResult(
                partition=Partition(assignments=labels, k=cfg.k),
                centroids=centroids,
                objective=objective(points, labels, centroids, cfg.distance),
                iterations_run=iterations,
                restart_index=restart,
                history=tuple(history),
                inertia=value,
            )

    assert best is not None

    logger.debug(
        f"k-means on '{e.milestone_id}': k=({cfg.k}), objective={best.objective:.6g}, "
        f"restart ({best.restart_index + 1}) / ({cfg.n_restarts})"
    )
    return best


def cluster_pair(e: EmbeddingSet, k1: int, cfg: KMeansConfig) -> Tuple[ClusteringResult, ClusteringResult]:
    """
    Two independent k-means runs at k1 and k2 = 2·k1, on seed streams derived from cfg.seed.
    :param e: Embedding set.
    :param k1: k of the first run.
    :param cfg: k-means config (its k is ignored).
    :return: (C_1 result, C_2 result).
    :raises PreconditionError: If 2·k1 > n.
    """
    if 2 * k1 > e.n:
        raise PreconditionError(f"2 * k1 ({2 * k1}) must be <= n ({e.n})")

    first = kmeans(e, cfg.with_k(k1, derive_seed(cfg.seed, "c1")))
    second = kmeans(e, cfg.with_k(2 * k1, derive_seed(cfg.seed, "c2")))
    return first, second
