#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import pytest

from emblens.config.ConfigManager import ConfigManager
from emblens.config.EvalSettings import EvalSettings
from emblens.util.errors import ConfigError
from emblens.util.seed import SEED_ENV


def test_defaults():
    settings = ConfigManager().resolve()

    assert settings == EvalSettings()
    assert settings.k1 == 10
    assert settings.k2 == 20
    assert settings.distance == "cosine"
    assert settings.reducer == "umap-lite"
    assert settings.target_dim == 3
    assert settings.n_neighbors == 50
    assert settings.sigma_factor == 0.4
    assert settings.seed == 0


def test_manifest_settings_and_spellings():
    settings = ConfigManager({"k1": 5, "bin_sigma_factor": 0.6, "reducer": "neighbor-graph"}).resolve()
    assert settings.k1 == 5
    assert settings.k2 == 10
    assert settings.sigma_factor == 0.6
    assert settings.reducer == "umap-lite"


def test_overrides_win_and_none_is_ignored():
    settings = ConfigManager({"k1": 5, "reducer": "pca"}).resolve({"k1": 20, "reducer": None})
    assert settings.k1 == 20
    assert settings.reducer == "pca"


def test_pretrained_widens_bins():
    assert ConfigManager().resolve({"pretrained": True}).sigma_factor == 0.8
    assert ConfigManager({"pretrained": True}).resolve().sigma_factor == 0.8


def test_explicit_sigma_beats_pretrained():
    assert ConfigManager().resolve({"pretrained": True, "sigma_factor": 0.5}).sigma_factor == 0.5
    assert ConfigManager({"bin_sigma_factor": 0.3}).resolve({"pretrained": True}).sigma_factor == 0.3


def test_seed_layers(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "11")
    assert ConfigManager().resolve().seed == 11
    assert ConfigManager({"seed": 4}).resolve().seed == 4
    assert ConfigManager({"seed": 4}).resolve({"seed": 9}).seed == 9


@pytest.mark.parametrize("settings", [
    {"k1": 0},
    {"reducer": "tsne"},
    {"distance": "manhattan"},
    {"unknown_key": 1},
    {"sigma_factor": 0},
    {"train_fraction": 1.0},
])
def test_invalid_settings(settings):
    with pytest.raises(ConfigError):
        ConfigManager(settings).resolve()


def test_conflicting_sigma_spellings():
    with pytest.raises(ConfigError, match="Conflicting"):
        ConfigManager({"bin_sigma_factor": 0.4, "sigma_factor": 0.8})


def test_component_configs_use_derived_seeds():
    settings = EvalSettings(seed=3, k1=4)

    a = settings.kmeans_config("epoch-0020")
    b = settings.kmeans_config("epoch-0040")
    assert a.k == 4
    assert a.seed != b.seed
    assert settings.reducer_config("epoch-0020").seed != a.seed
    assert settings.probe_config("epoch-0020", "knn").kind == "knn"
    assert settings.histogram_spec().dimensions == settings.target_dim
