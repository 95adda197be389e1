#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import json

import numpy as np
import pytest
from typer.testing import CliRunner

from emblens.__main__ import app
from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.store.ManifestManager import load_manifest
from emblens.store.embedding_io import load_embeddings, save_embeddings, save_partition
from emblens.util.seed import SEED_ENV

runner = CliRunner()

SMALL = ["--samples", "90", "--dim", "8", "--classes", "3", "--milestones", "4"]
FAST = ["--reducer", "pca", "--k1", "3"]


@pytest.fixture
def run_dir(tmp_path):
    out = tmp_path / "run"
    result = runner.invoke(app, ["synth", str(out), "--run-id", "cli", "--seed", "3"] + SMALL)
    assert result.exit_code == 0, result.output
    return out


def test_synth_then_eval(run_dir):
    result = runner.invoke(app, ["eval", str(run_dir / "manifest.json"), "--jobs", "2"] + FAST)

    assert result.exit_code == 0, result.output
    assert (run_dir / "cli.report.json").is_file()
    assert (run_dir / "cli.report.csv").is_file()

    document = json.loads((run_dir / "cli.report.json").read_text(encoding="utf-8"))
    assert document["settings"]["k1"] == 3
    assert document["reference_source"] == "reference"


def test_eval_shows_k2(run_dir, tmp_path):
    result = runner.invoke(app, ["eval", str(run_dir / "manifest.json"), "--k1", "20", "--reducer", "pca",
                                 "--out", str(tmp_path / "out"), "--format", "csv"])

    assert result.exit_code == 0, result.output
    assert "'k2': 40" in result.output
    assert (tmp_path / "out" / "cli.report.csv").is_file()
    assert not (tmp_path / "out" / "cli.report.json").exists()


def test_eval_report_independent_of_jobs(run_dir, tmp_path):
    for jobs in ("1", "3"):
        result = runner.invoke(app, ["eval", str(run_dir / "manifest.json"), "--jobs", jobs,
                                     "--out", str(tmp_path / jobs)] + FAST)
        assert result.exit_code == 0, result.output

    assert (tmp_path / "1" / "cli.report.json").read_bytes() == (tmp_path / "3" / "cli.report.json").read_bytes()
    assert (tmp_path / "1" / "cli.report.csv").read_bytes() == (tmp_path / "3" / "cli.report.csv").read_bytes()


def test_eval_invalid_manifest(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text('{"manifest_version": 2, "run_id": "x", "milestones": []}', encoding="utf-8")
    assert runner.invoke(app, ["eval", str(path)]).exit_code == 2


def test_eval_missing_manifest(tmp_path):
    assert runner.invoke(app, ["eval", str(tmp_path / "nothing.json")]).exit_code == 2


def test_eval_missing_embeddings(run_dir):
    (run_dir / "epoch-0020.emb").unlink()
    assert runner.invoke(app, ["eval", str(run_dir / "manifest.json")] + FAST).exit_code == 2


def test_eval_bad_settings(run_dir):
    assert runner.invoke(app, ["eval", str(run_dir / "manifest.json"), "--reducer", "tsne"]).exit_code == 2
    assert runner.invoke(app, ["eval", str(run_dir / "manifest.json"), "--format", "xml"]).exit_code == 2


def test_eval_bad_seed_env(run_dir, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "abc")
    assert runner.invoke(app, ["eval", str(run_dir / "manifest.json")] + FAST).exit_code == 2


def test_eval_non_finite_reference(run_dir):
    path = run_dir / "manifest.json"
    document = json.loads(path.read_text(encoding="utf-8"))
    document["milestones"][2]["reference_value"] = float("nan")
    path.write_text(json.dumps(document), encoding="utf-8")

    assert runner.invoke(app, ["eval", str(path)] + FAST).exit_code == 2
    assert not (run_dir / "cli.report.json").exists()


def test_eval_failed_milestone_still_reports(run_dir):
    save_embeddings(EmbeddingSet(values=np.ones((90, 2))), run_dir / "epoch-0040.emb")

    result = runner.invoke(app, ["eval", str(run_dir / "manifest.json")] + FAST)
    assert result.exit_code == 1

    csv_text = (run_dir / "cli.report.csv").read_text(encoding="utf-8")
    assert "epoch-0040,40,status,,failed" in csv_text


def test_report_and_rerun(run_dir, tmp_path):
    assert runner.invoke(app, ["eval", str(run_dir / "manifest.json")] + FAST).exit_code == 0
    report_path = run_dir / "cli.report.json"
    original = report_path.read_bytes()

    shown = runner.invoke(app, ["report", str(report_path), "--out", str(tmp_path / "copy")])
    assert shown.exit_code == 0, shown.output
    assert (tmp_path / "copy" / "cli.report.json").read_bytes() == original

    rerun = runner.invoke(app, ["report", str(report_path), "--rerun", "--out", str(tmp_path / "rerun")])
    assert rerun.exit_code == 0, rerun.output
    assert (tmp_path / "rerun" / "cli.report.json").read_bytes() == original


def test_report_invalid_file(tmp_path):
    path = tmp_path / "broken.report.json"
    path.write_text("[]", encoding="utf-8")
    assert runner.invoke(app, ["report", str(path)]).exit_code == 2


def test_synth_seed_is_deterministic(tmp_path, monkeypatch):
    assert runner.invoke(app, ["synth", str(tmp_path / "a"), "--seed", "5"] + SMALL).exit_code == 0
    monkeypatch.setenv(SEED_ENV, "5")
    assert runner.invoke(app, ["synth", str(tmp_path / "b")] + SMALL).exit_code == 0

    for name in ("epoch-0000.emb", "epoch-0060.emb", "epoch-0000.labels"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_synth_outlier_milestones(tmp_path):
    out = tmp_path / "run"
    result = runner.invoke(app, ["synth", str(out), "--outlier-milestones", "1,3"] + SMALL)
    assert result.exit_code == 0, result.output

    far = [int(np.count_nonzero(load_embeddings(out / f"epoch-{e:04d}.emb").row_norms() > 400.0))
           for e in (0, 20, 40, 60)]
    assert far == [0, 1, 0, 1]


@pytest.mark.parametrize("positions", ["4", "a,b"])
def test_synth_bad_outlier_milestones(tmp_path, positions):
    result = runner.invoke(app, ["synth", str(tmp_path / "run"), "--outlier-milestones", positions] + SMALL)
    assert result.exit_code == 2


def test_synth_bad_config(tmp_path):
    assert runner.invoke(app, ["synth", str(tmp_path / "run"), "--classes", "0"]).exit_code == 2


def test_probe(run_dir):
    result = runner.invoke(app, ["probe", str(run_dir / "epoch-0060.emb"), str(run_dir / "epoch-0060.labels"),
                                 "--knn-k", "5", "--epochs", "50"])
    assert result.exit_code == 0, result.output
    assert "knn" in result.output
    assert "linear" in result.output


def test_probe_bad_kind(run_dir):
    result = runner.invoke(app, ["probe", str(run_dir / "epoch-0060.emb"), str(run_dir / "epoch-0060.labels"),
                                 "--kind", "svm"])
    assert result.exit_code == 2


def test_probe_label_mismatch(run_dir, tmp_path):
    labels = tmp_path / "short.labels"
    save_partition(Partition.from_labels([0, 1, 2]), labels)
    assert runner.invoke(app, ["probe", str(run_dir / "epoch-0060.emb"), str(labels)]).exit_code == 2


def test_validate(run_dir):
    result = runner.invoke(app, ["validate", str(run_dir / "manifest.json"), "--k1", "3"])
    assert result.exit_code == 0, result.output
    assert "ok" in result.output


def test_validate_length_mismatch(run_dir):
    descriptor = load_manifest(run_dir / "manifest.json").milestones[1]
    save_partition(Partition.from_labels([0, 1, 2]), descriptor.labels)

    result = runner.invoke(app, ["validate", str(run_dir / "manifest.json")])
    assert result.exit_code == 1
    assert "epoch-0020" in result.output
