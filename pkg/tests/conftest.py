#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import numpy as np
import pytest

from emblens.config.EvalSettings import EvalSettings
from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.synth.SynthConfig import SynthConfig
from emblens.synth.generate import generate_trajectory
from emblens.synth.write import write_trajectory


@pytest.fixture(autouse=True)
def no_seed_env(monkeypatch):
    monkeypatch.delenv("EMBLENS_SEED", raising=False)


@pytest.fixture
def blobs():
    """
    Factory of well-separated Gaussian blobs; blob i is centered at separation·σ·e_i.
    """

    def make(n_per=50, dim=10, k=2, separation=20.0, sigma=1.0, seed=0):
        rng = np.random.default_rng(seed)
        centers = separation * sigma * np.eye(k, dim)
        labels = np.repeat(np.arange(k), n_per)
        values = centers[labels] + sigma * rng.standard_normal((k * n_per, dim))
        return EmbeddingSet(values=values, milestone_id="blobs"), Partition(assignments=labels, k=k)

    return make


@pytest.fixture
def small_synth_config():
    return SynthConfig(n_samples=90, dim=8, n_classes=3, n_milestones=4, epoch_step=20, seed=7)


@pytest.fixture
def synth_run(tmp_path, small_synth_config):
    """
    Manifest path of a small synthetic run written to disk.
    """
    return write_trajectory(generate_trajectory(small_synth_config), tmp_path / "run", "synth-test")


@pytest.fixture
def fast_settings():
    return EvalSettings(reducer="pca", k1=3, n_restarts=3, probe_epochs=50, knn_k=5)
