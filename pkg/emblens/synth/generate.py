#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from typing import List, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Milestone import Milestone
from emblens.data.Partition import Partition
from emblens.synth.SynthConfig import SynthConfig
from emblens.util.errors import PreconditionError
from emblens.util.seed import make_rng

logger = logging.getLogger(__name__)

FLAG_INJECTED_OUTLIERS = "injected-outliers"


def random_directions(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """
    Unit vectors drawn uniformly from the sphere.
    :param rng: Generator.
    :param count: Number of vectors.
    :param dim: Dimensionality.
    :return: (count, dim) unit rows.
    """
    directions = rng.standard_normal((count, dim))
    norms = np.linalg.norm(directions, axis=1)
    while np.any(norms == 0.0):
        zero = norms == 0.0
        directions[zero] = rng.standard_normal((int(zero.sum()), dim))
        norms = np.linalg.norm(directions, axis=1)
    return directions / norms[:, None]


def place_outliers(values: np.ndarray, count: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """
    Replace `count` distinct random rows with points at distance `radius` from the origin.
    :param values: (n, d) matrix (not modified).
    :param count: Rows to replace.
    :param radius: Outlier distance.
    :param rng: Generator.
    :return: New matrix.
    """
    replaced = values.copy()
    if count == 0:
        return replaced
    rows = np.sort(rng.choice(values.shape[0], size=count, replace=False))
    replaced[rows] = radius * random_directions(rng, count, values.shape[1])
    return replaced


def inject_outliers(e: EmbeddingSet, count: int, radius_factor: float, seed: int) -> EmbeddingSet:
    """
    Replace `count` seeded rows with points at radius_factor × (max row norm) in random directions.
    :param e: Embedding set.
    :param count: Outlier count, 0 <= count < n.
    :param radius_factor: Multiple of the largest row norm.
    :param seed: Seed.
    :return: New embedding set (the input itself when count is 0).
    :raises PreconditionError: If count is negative or >= n.
    """
    if count < 0 or count >= e.n:
        raise PreconditionError(f"Outlier count ({count}) must be in [0, n) with n=({e.n})")
    if count == 0:
        return e

    radius = radius_factor * float(e.row_norms().max())
    values = place_outliers(e.values.astype(np.float64), count, radius, make_rng(seed, "outliers"))
    return e.with_values(values.astype(e.values.dtype), FLAG_INJECTED_OUTLIERS)


def class_centers(cfg: SynthConfig) -> np.ndarray:
    return cfg.between_scale * random_directions(make_rng(cfg.seed, "synth", "centers"), cfg.n_classes, cfg.dim)


def class_labels(cfg: SynthConfig) -> np.ndarray:
    """
    Balanced labels (each class gets ⌊n/k⌋ or ⌈n/k⌉ samples) in seeded order.
    """
    labels = np.arange(cfg.n_samples) % cfg.n_classes
    return make_rng(cfg.seed, "synth", "labels").permutation(labels)


def nearest_center_accuracy(values: np.ndarray, centers: np.ndarray, labels: np.ndarray) -> float:
    """
    Accuracy of assigning each sample to its nearest class center (ties to the lowest index).
    :param values: Samples.
    :param centers: Class centers.
    :param labels: True classes.
    :return: Accuracy.
    """
    predicted = np.argmin(cdist(values, centers, metric="sqeuclidean"), axis=1)
    return float(np.mean(predicted == labels))


def generate_trajectory(cfg: SynthConfig) -> List[Milestone]:
    """
    Seeded synthetic run whose class clusters tighten from milestone to milestone.

    Class centers and labels are drawn once; each milestone draws its own
    isotropic noise from a stream derived from (seed, milestone index).

    :param cfg: Synth config.
    :return: Milestones in order, each with ground truth and the nearest-center reference value.
    """
    centers = class_centers(cfg)
    labels = class_labels(cfg)
    ground_truth = Partition(assignments=labels, k=cfg.n_classes)

    milestones = []
    for index, (t, rate) in enumerate(zip(cfg.schedule(), cfg.rates())):
        rng = make_rng(cfg.seed, "synth", "milestone", index)
        sigma = cfg.sigma(t)

        values = centers[labels] + sigma * rng.standard_normal((cfg.n_samples, cfg.dim))

        count = int(round(rate * cfg.n_samples))
        if rate > 0:
            count = min(max(1, count), cfg.n_samples - 1)
        flags: Tuple[str, ...] = ()
        if count:
            values = place_outliers(values, count, cfg.outlier_radius_factor * cfg.between_scale, rng)
            flags = (FLAG_INJECTED_OUTLIERS,)

        milestone_id = cfg.milestone_id(index)
        logger.debug(f"Synth milestone ({index + 1}) / ({cfg.n_milestones}): t={t:.3f}, sigma={sigma:.3f}")

        milestones.append(Milestone(
            id=milestone_id,
            epoch=index * cfg.epoch_step,
            embeddings=EmbeddingSet(values=values, milestone_id=milestone_id, flags=flags),
            ground_truth=ground_truth,
            reference_value=nearest_center_accuracy(values, centers, labels),
        ))

    return milestones
