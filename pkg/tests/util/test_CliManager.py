#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import io

from rich.console import Console

from emblens.config.EvalSettings import EvalSettings
from emblens.trajectory.CorrelationResult import Correlation, CorrelationResult
from emblens.trajectory.MetricSeries import MetricSeries
from emblens.trajectory.MilestoneRecord import MilestoneRecord, STATUS_FAILED
from emblens.trajectory.TrajectoryResult import TrajectoryResult
from emblens.util.CliManager import CliManager


def make_cli():
    buffer = io.StringIO()
    return CliManager(Console(file=buffer, width=200, markup=False)), buffer


def make_result(late_from_epoch=None):
    records = (
        MilestoneRecord(milestone_id="epoch-0000", epoch=0, values={"histogram_entropy": 1.5, "reference": 0.1}),
        MilestoneRecord(milestone_id="epoch-0020", epoch=20, status=STATUS_FAILED, error="FormatError: bad"),
        MilestoneRecord(
            milestone_id="epoch-0040",
            epoch=40,
            values={"histogram_entropy": 2.5, "reference": 0.9},
            flags={"histogram_entropy": ("outlier-suspect",)},
        ),
    )
    ids = tuple(r.milestone_id for r in records)
    epochs = tuple(r.epoch for r in records)
    series = (
        MetricSeries("histogram_entropy", ids, epochs, (1.5, None, 2.5)),
        MetricSeries("reference", ids, epochs, (0.1, None, 0.9)),
    )
    correlations = (
        CorrelationResult(
            metric="histogram_entropy",
            reference="reference",
            with_init=Correlation(r=-0.95, p=0.01, n=5),
            without_init=Correlation(r=None, p=None, n=2),
            late=Correlation(r=0.5, p=0.4, n=4) if late_from_epoch is not None else None,
        ),
    )
    return TrajectoryResult(
        run_id="run",
        manifest=None,
        settings=EvalSettings(late_from_epoch=late_from_epoch),
        records=records,
        series=series,
        reference_source="reference",
        correlations=correlations,
    )


def test_format_cell():
    cli, _ = make_cli()
    assert cli.format_cell(None) == "-"
    assert cli.format_cell(Correlation(r=None, p=None, n=2)) == "undefined (n=2)"
    assert cli.format_cell(Correlation(r=0.5, p=0.25, n=10)) == "+0.500 (p=0.25, n=10)"


def test_style_of_marks_negative_and_not_significant():
    cli, _ = make_cli()
    assert cli.style_of(Correlation(r=-0.9, p=0.001, n=10)) == "red"
    assert cli.style_of(Correlation(r=0.9, p=0.2, n=10)) == "grey50"
    assert cli.style_of(Correlation(r=None, p=None, n=2)) == "grey50"
    assert cli.style_of(Correlation(r=0.9, p=0.001, n=10)) == ""


def test_format_result_lists_series_and_correlations():
    cli, buffer = make_cli()
    cli.format_result(make_result())

    output = buffer.getvalue()
    assert "histogram_entropy" in output
    assert "failed" in output
    assert "outlier-suspect" in output
    assert "w/o init" in output
    assert "undefined (n=2)" in output
    assert "epoch >=" not in output


def test_format_correlations_adds_late_column():
    cli, buffer = make_cli()
    cli.format_correlations(make_result(late_from_epoch=20))
    assert "epoch >= 20" in buffer.getvalue()


def test_format_settings_shows_k2():
    cli, buffer = make_cli()
    cli.format_settings(EvalSettings(k1=7))
    assert "'k2': 14" in buffer.getvalue()
