#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import math

import numpy as np
import pytest

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.metrics import geometry
from emblens.metrics.HistogramGrid import HistogramSpec
from emblens.metrics.geometry import (
    FLAG_DEGENERATE,
    FLAG_DEGENERATE_DIMENSION,
    build_histogram,
    histogram_entropy,
    histogram_entropy_result,
    per_sample_silhouettes,
    silhouette,
)
from emblens.util.errors import ConfigError, PreconditionError


def naive_silhouettes(values, labels):
    n = values.shape[0]
    result = np.zeros(n)
    for i in range(n):
        own = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not own:
            continue
        distances = np.linalg.norm(values - values[i], axis=1)
        a = distances[own].mean()
        b = min(distances[labels == c].mean() for c in set(labels.tolist()) if c != labels[i])
        result[i] = (b - a) / max(a, b)
    return result


def corner_cube(repeat=5):
    corners = np.array([[x, y, z] for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)])
    return EmbeddingSet(values=np.repeat(corners, repeat, axis=0))


def test_four_point_example():
    e = EmbeddingSet(values=[[0.0, 0.0], [0.0, 1.0], [10.0, 10.0], [10.0, 11.0]])
    p = Partition.from_labels([0, 0, 1, 1])

    per_sample = per_sample_silhouettes(e, p)
    assert np.all((per_sample > 0.9) & (per_sample < 0.95))
    assert silhouette(e, p) == pytest.approx(0.930, abs=0.002)


@pytest.mark.parametrize("seed", range(50))
def test_silhouette_matches_naive(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, 201))
    k = int(rng.integers(2, 9))
    values = rng.standard_normal((n, int(rng.integers(1, 6))))
    labels = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])

    actual = per_sample_silhouettes(EmbeddingSet(values=values), Partition.from_labels(labels))
    assert np.allclose(actual, naive_silhouettes(values, labels), atol=1e-9, rtol=0)


def test_chunking_does_not_change_result(monkeypatch):
    rng = np.random.default_rng(0)
    e = EmbeddingSet(values=rng.standard_normal((50, 3)))
    p = Partition.from_labels(rng.integers(0, 3, size=50), k=3)

    whole = per_sample_silhouettes(e, p)
    monkeypatch.setattr(geometry, "SILHOUETTE_CHUNK", 7)
    assert np.allclose(per_sample_silhouettes(e, p), whole, atol=1e-12, rtol=0)


def test_singleton_cluster_scores_zero():
    e = EmbeddingSet(values=[[0.0], [0.1], [5.0]])
    per_sample = per_sample_silhouettes(e, Partition.from_labels([0, 0, 1]))
    assert per_sample[2] == 0.0
    assert per_sample[0] > 0.9


def test_empty_labels_are_skipped():
    e = EmbeddingSet(values=[[0.0], [0.1], [5.0], [5.1]])
    with_gap = Partition(assignments=[0, 0, 3, 3], k=5)
    assert silhouette(e, with_gap) == pytest.approx(silhouette(e, Partition.from_labels([0, 0, 1, 1])))


def test_interleaved_clusters_score_near_zero():
    rng = np.random.default_rng(1)
    e = EmbeddingSet(values=rng.standard_normal((400, 4)))
    assert abs(silhouette(e, Partition.from_labels(rng.integers(0, 2, size=400)))) < 0.1


def test_silhouette_invariant_under_isometry():
    rng = np.random.default_rng(2)
    values = rng.standard_normal((80, 4))
    p = Partition.from_labels(rng.integers(0, 3, size=80), k=3)
    rotation, _ = np.linalg.qr(rng.standard_normal((4, 4)))

    moved = EmbeddingSet(values=values @ rotation + np.array([3.0, -1.0, 0.5, 7.0]))
    assert silhouette(moved, p) == pytest.approx(silhouette(EmbeddingSet(values=values), p), abs=1e-9)


def test_silhouette_is_the_mean_of_samples(blobs):
    e, gt = blobs(n_per=20)
    assert silhouette(e, gt) == pytest.approx(float(np.mean(per_sample_silhouettes(e, gt))), abs=1e-12)
    assert silhouette(e, gt) > 0.7


def test_silhouette_needs_two_clusters():
    with pytest.raises(PreconditionError):
        silhouette(EmbeddingSet(values=np.ones((4, 2))), Partition(assignments=[1, 1, 1, 1], k=3))


def test_silhouette_length_mismatch():
    with pytest.raises(PreconditionError):
        silhouette(EmbeddingSet(values=np.ones((4, 2))), Partition.from_labels([0, 1, 0]))


def test_identical_samples_have_zero_entropy():
    result = histogram_entropy_result(EmbeddingSet(values=np.ones((20, 3))), HistogramSpec())
    assert result.value == 0.0
    assert result.grid is None
    assert FLAG_DEGENERATE in result.flags


def test_equal_occupancy_of_eight_bins():
    result = histogram_entropy_result(corner_cube(), HistogramSpec())
    assert result.grid.occupied == 8
    assert result.value == pytest.approx(math.log(8), abs=1e-12)
    assert result.flags == ()


def test_top_edge_falls_into_last_bin():
    e = EmbeddingSet(values=[[0.0], [0.0], [1.0], [1.0]])
    grid, sigmas, dropped = build_histogram(e, HistogramSpec(dimensions=1))

    # width 0.4 · 0.5 puts the maximum exactly on the upper edge of bin 4
    assert sigmas[0] == 0.5
    assert dropped == ()
    assert grid.as_dict() == {(0,): 2, (4,): 2}


def test_degenerate_dimension_is_dropped():
    values = corner_cube().values.copy()
    values[:, 2] = 3.0
    result = histogram_entropy_result(EmbeddingSet(values=values), HistogramSpec())

    assert FLAG_DEGENERATE_DIMENSION in result.flags
    assert result.dropped_dimensions == (2,)
    assert result.grid.kept_dimensions == (0, 1)
    assert result.value == pytest.approx(math.log(4), abs=1e-12)


def test_entropy_bounded_by_occupied_bins():
    rng = np.random.default_rng(3)
    e = EmbeddingSet(values=rng.standard_normal((300, 3)))
    result = histogram_entropy_result(e, HistogramSpec())

    assert 0.0 <= result.value <= math.log(result.grid.occupied) + 1e-12
    assert result.grid.occupied <= e.n
    assert result.grid.n == e.n


@pytest.mark.parametrize("scale, shift", [(2.0, 0.0), (0.25, 0.0), (3.7, -11.0)])
def test_bins_invariant_under_axis_scaling(scale, shift):
    rng = np.random.default_rng(4)
    values = rng.standard_normal((200, 3))
    spec = HistogramSpec()

    base, _, _ = build_histogram(EmbeddingSet(values=values), spec)
    moved, _, _ = build_histogram(EmbeddingSet(values=scale * values + shift), spec)
    assert moved.as_dict() == base.as_dict()


def test_distant_outliers_lower_entropy(blobs):
    e, _ = blobs(n_per=100, dim=3, k=2, separation=8.0)
    spec = HistogramSpec()
    radius = float(e.row_norms().max())

    directions = np.random.default_rng(5).standard_normal((5, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    with_outliers = EmbeddingSet(values=np.vstack([e.values, 50.0 * radius * directions]))

    assert histogram_entropy(with_outliers, spec) < histogram_entropy(e, spec)


def test_wider_bins_never_raise_entropy():
    e = EmbeddingSet(values=np.random.default_rng(6).standard_normal((500, 3)))
    assert histogram_entropy(e, HistogramSpec(sigma_factor=0.8)) <= histogram_entropy(e, HistogramSpec())


def test_dimension_mismatch():
    with pytest.raises(PreconditionError):
        histogram_entropy(EmbeddingSet(values=np.ones((5, 4))), HistogramSpec(dimensions=3))


@pytest.mark.parametrize("kwargs", [{"sigma_factor": 0.0}, {"dimensions": 0}, {"origin": "zero"}])
def test_invalid_histogram_spec(kwargs):
    with pytest.raises(ConfigError):
        HistogramSpec(**kwargs)
