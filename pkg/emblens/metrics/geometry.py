#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.metrics.HistogramGrid import HistogramSpec, HistogramGrid
from emblens.metrics.partition import entropy_of_counts
from emblens.util.errors import PreconditionError

logger = logging.getLogger(__name__)

SILHOUETTE_CHUNK = 1024

DEGENERATE_SIGMA = 1e-12

FLAG_DEGENERATE_DIMENSION = "degenerate-dimension"
FLAG_DEGENERATE = "degenerate"


@dataclass(frozen=True)
class EntropyResult:
    """
    Histogram entropy with its grid and flags.
    """

    value: float

    grid: HistogramGrid | None

    sigmas: np.ndarray

    dropped_dimensions: Tuple[int, ...]

    flags: Tuple[str, ...]


def per_sample_silhouettes(e: EmbeddingSet, p: Partition) -> np.ndarray:
    """
    Per-sample silhouette S_i = (b_i − a_i) / max(a_i, b_i) under Euclidean distance.

    a_i is the mean distance to the other members of i's cluster, b_i the
    smallest mean distance to the members of another non-empty cluster.
    Samples in singleton clusters get 0.

    :param e: Embedding set.
    :param p: Partition with at least 2 non-empty clusters.
    :return: (n,) silhouettes.
    :raises PreconditionError: If lengths differ or fewer than 2 clusters are non-empty.
    """
    if p.n != e.n:
        raise PreconditionError(f"Partition length ({p.n}) does not match embeddings ({e.n})")

    sizes = p.counts()
    present = np.flatnonzero(sizes > 0)
    if present.size < 2:
        raise PreconditionError(f"Silhouette needs >= 2 non-empty clusters, got ({present.size})")

    values = e.values.astype(np.float64)
    labels = np.searchsorted(present, p.assignments)
    sizes = sizes[present].astype(np.float64)

    one_hot = np.zeros((e.n, present.size))
    one_hot[np.arange(e.n), labels] = 1.0

    silhouettes = np.zeros(e.n)
    for start in range(0, e.n, SILHOUETTE_CHUNK):
        stop = min(start + SILHOUETTE_CHUNK, e.n)
        sums = cdist(values[start:stop], values, metric="euclidean") @ one_hot

        own = labels[start:stop]
        rows = np.arange(stop - start)
        own_size = sizes[own]

        with np.errstate(divide="ignore", invalid="ignore"):
            a = np.where(own_size > 1, sums[rows, own] / (own_size - 1.0), 0.0)
            means = sums / sizes[None, :]
        means[rows, own] = np.inf
        b = means.min(axis=1)

        denominator = np.maximum(a, b)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(denominator > 0, (b - a) / denominator, 0.0)
        silhouettes[start:stop] = np.where(own_size > 1, s, 0.0)

    return silhouettes


def silhouette(e: EmbeddingSet, p: Partition) -> float:
    """
    Silhouette score, the mean of the per-sample silhouettes.
    :param e: Embedding set.
    :param p: Partition.
    :return: Score in [−1, 1].
    """
    return float(np.mean(per_sample_silhouettes(e, p)))


def build_histogram(e: EmbeddingSet, spec: HistogramSpec) -> Tuple[HistogramGrid | None, np.ndarray, Tuple[int, ...]]:
    """
    Bin embeddings with per-dimension widths l_i = c·σ_i from the data minimum.

    Dimensions with σ_i < 1e-12 are left out; the top edge falls into the last bin.

    :param e: Embedding set.
    :param spec: Histogram spec.
    :return: (grid or None if every dimension is degenerate, σ per input dimension, dropped dimensions).
    :raises PreconditionError: If e.d differs from spec.dimensions.
    """
    if e.d != spec.dimensions:
        raise PreconditionError(f"Histogram expects ({spec.dimensions}) dimensions, got ({e.d})")

    values = e.values.astype(np.float64)
    sigmas = values.std(axis=0)  # population convention (divisor n)

    kept = tuple(int(i) for i in np.flatnonzero(sigmas >= DEGENERATE_SIGMA))
    dropped = tuple(int(i) for i in np.flatnonzero(sigmas < DEGENERATE_SIGMA))
    if not kept:
        return None, sigmas, dropped

    data = values[:, kept]
    widths = spec.sigma_factor * sigmas[list(kept)]
    origins = data.min(axis=0)

    last_bin = np.maximum(np.ceil((data.max(axis=0) - origins) / widths).astype(np.int64) - 1, 0)
    indices = np.floor((data - origins) / widths).astype(np.int64)
    indices = np.minimum(indices, last_bin)

    bins, counts = np.unique(indices, axis=0, return_counts=True)
    grid = HistogramGrid(bins=bins, counts=counts, widths=widths, origins=origins, kept_dimensions=kept)
    return grid, sigmas, dropped


def histogram_entropy_result(e: EmbeddingSet, spec: HistogramSpec) -> EntropyResult:
    """
    Entropy of the binned empirical distribution, with grid and flags.
    :param e: Embedding set (the reduced space in the pipeline).
    :param spec: Histogram spec.
    :return: Entropy result.
    """
    grid, sigmas, dropped = build_histogram(e, spec)

    flags: Tuple[str, ...] = ()
    if dropped:
        flags += (FLAG_DEGENERATE_DIMENSION,)
        logger.warning(f"Histogram on '{e.milestone_id}': dropped degenerate dimension(s) {list(dropped)}")

    if grid is None:
        return EntropyResult(value=0.0, grid=None, sigmas=sigmas, dropped_dimensions=dropped,
                             flags=flags + (FLAG_DEGENERATE,))

    return EntropyResult(
        value=entropy_of_counts(grid.counts),
        grid=grid,
        sigmas=sigmas,
        dropped_dimensions=dropped,
        flags=flags,
    )


def histogram_entropy(e: EmbeddingSet, spec: HistogramSpec) -> float:
    """
    Histogram entropy H(Z) in nats.
    :param e: Embedding set.
    :param spec: Histogram spec.
    :return: Entropy.
    """
    return histogram_entropy_result(e, spec).value
