#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import csv
import io
import json

import pytest

from emblens.store.ManifestManager import load_manifest
from emblens.trajectory.MetricSeries import HISTOGRAM_ENTROPY
from emblens.trajectory.MilestoneRecord import MilestoneRecord, STATUS_FAILED
from emblens.trajectory.TrajectoryManager import TrajectoryManager
from emblens.trajectory.report import (
    CSV_COLUMNS,
    emit_report,
    expand_formats,
    load_report,
    parse_report,
    report_stem,
    write_reports,
)
from emblens.util.errors import InputError, PreconditionError


@pytest.fixture
def result(synth_run, fast_settings):
    return TrajectoryManager(fast_settings, jobs=1).evaluate_run(load_manifest(synth_run))


def test_csv_has_a_row_per_metric_and_milestone(result):
    rows = list(csv.reader(io.StringIO(emit_report(result, "csv"))))

    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + 4 * 8
    assert rows[1][:3] == ["epoch-0000", "0", "ami_gt"]


def test_csv_values_parse_back_exactly(result):
    rows = list(csv.DictReader(io.StringIO(emit_report(result, "csv"))))
    for row, (record, metric) in zip(rows, [(r, m) for r in result.records for m in r.values]):
        assert float(row["value"]) == record.values[metric]


def test_text_report_is_json(result):
    document = json.loads(emit_report(result))
    assert document["run_id"] == "synth-test"
    assert document["k2"] == 6
    assert document["reference_source"] == "reference"
    assert len(document["milestones"]) == 4
    assert emit_report(result).endswith("}\n")


def test_rerun_gives_identical_bytes(result, synth_run, fast_settings):
    again = TrajectoryManager(fast_settings, jobs=1).evaluate_run(load_manifest(synth_run))
    assert emit_report(again) == emit_report(result)
    assert emit_report(again, "csv") == emit_report(result, "csv")


def test_parse_round_trip(result):
    text = emit_report(result)
    parsed = parse_report(text)

    assert parsed.records == result.records
    assert parsed.correlations == result.correlations
    assert emit_report(parsed) == text


def test_write_reports(result, tmp_path):
    paths = write_reports(result, tmp_path / "out")

    assert [p.name for p in paths] == ["synth-test.report.json", "synth-test.report.csv"]
    assert all(p.exists() for p in paths)
    assert paths[0].read_text(encoding="utf-8") == emit_report(result)
    assert load_report(paths[0]).records == result.records
    assert not list((tmp_path / "out").glob("*.tmp"))


def test_write_single_format(result, tmp_path):
    paths = write_reports(result, tmp_path, "csv")
    assert [p.name for p in paths] == ["synth-test.report.csv"]


def test_failed_milestone_row(fast_settings):
    records = [
        MilestoneRecord(milestone_id="epoch-0000", epoch=0, values={HISTOGRAM_ENTROPY: 1.5}),
        MilestoneRecord(milestone_id="epoch-0020", epoch=20, status=STATUS_FAILED, error="PreconditionError: k > n"),
    ]
    result = TrajectoryManager(fast_settings).analyze("run", None, records)

    lines = emit_report(result, "csv").splitlines()
    assert lines[1] == "epoch-0000,0,histogram_entropy,1.5,"
    assert lines[2] == "epoch-0020,20,status,,failed"

    milestone = json.loads(emit_report(result))["milestones"][1]
    assert milestone["status"] == "failed"
    assert milestone["error"] == "PreconditionError: k > n"


def test_empty_result(fast_settings):
    with pytest.raises(PreconditionError):
        emit_report(TrajectoryManager(fast_settings).analyze("run", None, []))


def test_unknown_format(result):
    with pytest.raises(PreconditionError):
        emit_report(result, "xml")
    with pytest.raises(InputError):
        expand_formats("xml")


@pytest.mark.parametrize("text", ["not json", "[]", '{"run_id": "x"}'])
def test_invalid_report_text(text):
    with pytest.raises(InputError):
        parse_report(text)


def test_report_stem():
    assert report_stem("run 1/a") == "run_1_a"
    assert report_stem("") == "run"
