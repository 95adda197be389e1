#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import json

import numpy as np
import pytest

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.store.ManifestManager import ManifestManager, load_manifest, load_milestone
from emblens.store.embedding_io import save_embeddings
from emblens.util.errors import FormatError, InputError, ManifestError


def write_run(tmp_path, epochs, ids=None, extra=None, labels=None):
    ids = ids or [f"m{i}" for i in range(len(epochs))]
    milestones = []
    for milestone_id, epoch in zip(ids, epochs):
        save_embeddings(EmbeddingSet(values=np.ones((4, 3))), tmp_path / f"{milestone_id}.emb")
        entry = {"id": milestone_id, "epoch": epoch, "embeddings": f"{milestone_id}.emb"}
        if labels is not None:
            (tmp_path / f"{milestone_id}.labels").write_text(labels, encoding="utf-8")
            entry["labels"] = f"{milestone_id}.labels"
        milestones.append(entry)

    document = {"run_id": "run", "milestones": milestones}
    document.update(extra or {})
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def test_load_manifest(tmp_path):
    manifest = load_manifest(write_run(tmp_path, [0, 20, 40]))

    assert manifest.run_id == "run"
    assert [m.epoch for m in manifest.milestones] == [0, 20, 40]
    assert manifest.milestones[1].embeddings == tmp_path / "m1.emb"
    assert manifest.settings == {}
    assert not manifest.has_labels


def test_settings_are_passed_through(tmp_path):
    manifest = load_manifest(write_run(tmp_path, [0], extra={"settings": {"k1": 5, "reducer": "pca"}}))
    assert manifest.settings == {"k1": 5, "reducer": "pca"}


def test_duplicate_id(tmp_path):
    with pytest.raises(ManifestError, match="Duplicate"):
        load_manifest(write_run(tmp_path, [0, 20], ids=["a", "a"]))


def test_decreasing_epochs(tmp_path):
    with pytest.raises(ManifestError, match="Decreasing"):
        load_manifest(write_run(tmp_path, [0, 40, 20]))


def test_equal_epochs_allowed(tmp_path):
    assert len(load_manifest(write_run(tmp_path, [20, 20])).milestones) == 2


def test_unknown_field(tmp_path):
    with pytest.raises(ManifestError):
        load_manifest(write_run(tmp_path, [0], extra={"comment": "x"}))


def test_no_milestones(tmp_path):
    with pytest.raises(ManifestError, match="No milestones"):
        load_manifest(write_run(tmp_path, []))


def test_unresolvable_path(tmp_path):
    path = write_run(tmp_path, [0, 20])
    (tmp_path / "m1.emb").unlink()
    with pytest.raises(ManifestError, match="unresolvable"):
        load_manifest(path)


def test_manifest_errors_exit_with_two(tmp_path):
    with pytest.raises(InputError) as info:
        load_manifest(tmp_path / "absent.json")
    assert info.value.exit_code == 2


def test_save_then_load(tmp_path):
    save_embeddings(EmbeddingSet(values=np.ones((2, 2))), tmp_path / "a.emb")

    manager = ManifestManager(tmp_path / "manifest.json")
    manager.set_manifest("run", [{"id": "a", "epoch": 0, "embeddings": "a.emb", "reference_value": 0.5}], None)
    manager.save()

    manifest = load_manifest(tmp_path / "manifest.json")
    assert manifest.milestones[0].reference_value == 0.5
    assert manifest.has_reference


def test_load_milestone_with_labels(tmp_path):
    manifest = load_manifest(write_run(tmp_path, [0], labels="0\n1\n1\n0\n"))
    milestone = load_milestone(manifest.milestones[0])

    assert milestone.id == "m0"
    assert milestone.embeddings.milestone_id == "m0"
    assert milestone.ground_truth is not None
    assert milestone.ground_truth.k == 2


def test_load_milestone_label_length_mismatch(tmp_path):
    manifest = load_manifest(write_run(tmp_path, [0], labels="0\n1\n"))
    with pytest.raises(FormatError, match="Length mismatch"):
        load_milestone(manifest.milestones[0])


@pytest.mark.parametrize("value", [float("nan"), float("inf"), float("-inf")])
def test_non_finite_reference_value(tmp_path, value):
    path = write_run(tmp_path, [0, 20])
    document = json.loads(path.read_text(encoding="utf-8"))
    document["milestones"][1]["reference_value"] = value
    path.write_text(json.dumps(document), encoding="utf-8")

    with pytest.raises(ManifestError, match="reference_value"):
        load_manifest(path)
