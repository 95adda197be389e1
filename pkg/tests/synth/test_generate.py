#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import numpy as np
import pytest

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.metrics.HistogramGrid import HistogramSpec
from emblens.metrics.geometry import histogram_entropy, silhouette
from emblens.reduce.ReducerConfig import ReducerConfig
from emblens.reduce.reducer import reduce
from emblens.synth.SynthConfig import SynthConfig
from emblens.synth.generate import FLAG_INJECTED_OUTLIERS, generate_trajectory, inject_outliers
from emblens.util.errors import ConfigError, PreconditionError


def test_same_seed_same_trajectory(small_synth_config):
    first = generate_trajectory(small_synth_config)
    second = generate_trajectory(small_synth_config)

    for a, b in zip(first, second):
        assert a.embeddings == b.embeddings
        assert a.ground_truth == b.ground_truth
        assert a.reference_value == b.reference_value


def test_other_seed_other_trajectory(small_synth_config):
    first = generate_trajectory(small_synth_config)[0].embeddings.values
    other = generate_trajectory(SynthConfig(n_samples=90, dim=8, n_classes=3, n_milestones=4, seed=8))
    assert not np.array_equal(first, other[0].embeddings.values)


def test_ids_and_epochs(small_synth_config):
    milestones = generate_trajectory(small_synth_config)
    assert [m.id for m in milestones] == ["epoch-0000", "epoch-0020", "epoch-0040", "epoch-0060"]
    assert [m.epoch for m in milestones] == [0, 20, 40, 60]
    assert all(m.embeddings.values.shape == (90, 8) for m in milestones)


def test_balanced_labels(small_synth_config):
    gt = generate_trajectory(small_synth_config)[0].ground_truth
    assert gt.counts().tolist() == [30, 30, 30]


def test_labels_shared_across_milestones(small_synth_config):
    milestones = generate_trajectory(small_synth_config)
    assert all(m.ground_truth == milestones[0].ground_truth for m in milestones)


def test_clusters_tighten(small_synth_config):
    milestones = generate_trajectory(small_synth_config)
    scores = [silhouette(m.embeddings, m.ground_truth) for m in milestones]
    assert all(later > earlier for earlier, later in zip(scores, scores[1:]))


def test_reference_improves(small_synth_config):
    references = [m.reference_value for m in generate_trajectory(small_synth_config)]
    assert references[0] < 0.95
    assert references[-1] == 1.0


def test_custom_schedule():
    cfg = SynthConfig(n_samples=60, dim=4, n_classes=2, n_milestones=2, t_schedule=(1.0, 1.0), seed=1)
    first, second = generate_trajectory(cfg)
    # same spread, independent noise
    assert not np.array_equal(first.embeddings.values, second.embeddings.values)
    assert first.embeddings.values.std() == pytest.approx(second.embeddings.values.std(), rel=0.2)


def test_outlier_rate_places_at_least_one():
    cfg = SynthConfig(n_samples=90, dim=8, n_classes=3, n_milestones=2, outlier_rates=(0.0, 0.001), seed=2)
    clean, polluted = generate_trajectory(cfg)

    assert FLAG_INJECTED_OUTLIERS not in clean.embeddings.flags
    assert FLAG_INJECTED_OUTLIERS in polluted.embeddings.flags
    norms = polluted.embeddings.row_norms()
    assert np.count_nonzero(np.isclose(norms, 50.0 * 10.0)) == 1


def test_outlier_count_follows_rate():
    cfg = SynthConfig(n_samples=2000, dim=8, n_classes=4, n_milestones=1, outlier_rates=(0.0025,), seed=3)
    norms = generate_trajectory(cfg)[0].embeddings.row_norms()
    assert np.count_nonzero(norms > 400.0) == 5


def test_inject_outliers():
    e = EmbeddingSet(values=np.random.default_rng(0).standard_normal((50, 4)), milestone_id="m")
    radius = float(e.row_norms().max())

    polluted = inject_outliers(e, 3, 50.0, seed=1)
    assert polluted.milestone_id == "m"
    assert FLAG_INJECTED_OUTLIERS in polluted.flags
    assert np.count_nonzero(np.isclose(polluted.row_norms(), 50.0 * radius)) == 3
    assert polluted == inject_outliers(e, 3, 50.0, seed=1)


def test_inject_no_outliers_returns_input():
    e = EmbeddingSet(values=np.ones((5, 2)))
    assert inject_outliers(e, 0, 50.0, seed=0) is e


@pytest.mark.parametrize("count", [-1, 5])
def test_inject_outlier_count_out_of_range(count):
    with pytest.raises(PreconditionError):
        inject_outliers(EmbeddingSet(values=np.ones((5, 2))), count, 50.0, seed=0)


@pytest.mark.parametrize("seed", range(10))
def test_injected_outliers_lower_entropy(seed):
    cfg = SynthConfig(n_samples=500, dim=16, n_classes=5, n_milestones=3, seed=seed)
    spec = HistogramSpec()
    reducer = ReducerConfig(seed=seed)

    for milestone in generate_trajectory(cfg):
        polluted = inject_outliers(milestone.embeddings, 5, 50.0, seed=seed)
        clean_entropy = histogram_entropy(reduce(milestone.embeddings, reducer), spec)
        polluted_entropy = histogram_entropy(reduce(polluted, reducer), spec)
        assert polluted_entropy < clean_entropy, milestone.id


@pytest.mark.parametrize("kwargs", [
    {"n_classes": 0},
    {"n_classes": 100, "n_samples": 50},
    {"within_sigma_start": 0.5, "within_sigma_end": 6.0},
    {"t_schedule": (0.0, 1.0)},
    {"outlier_rates": (1.0,) * 10},
    {"epoch_step": 0},
])
def test_invalid_config(kwargs):
    with pytest.raises(ConfigError):
        SynthConfig(**kwargs)
