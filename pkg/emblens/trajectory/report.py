#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

"""
Report emission and parsing.

The structured report is JSON in a fixed key order without timestamps, so the
same inputs always give the same bytes; floats are written with `repr` and
parse back exactly.
"""

import csv
import io
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Sequence

from pydantic import ValidationError

from emblens.config.EvalSettings import EvalSettings
from emblens.schema.ReportSchema import ReportSchema, CorrelationSchema
from emblens.store.ReportManager import ReportManager
from emblens.trajectory.CorrelationResult import Correlation, CorrelationResult, TrendResult
from emblens.trajectory.MetricSeries import MetricSeries
from emblens.trajectory.MilestoneRecord import MilestoneRecord
from emblens.trajectory.TrajectoryResult import TrajectoryResult
from emblens.util.errors import InputError, PreconditionError
from emblens.util.format import format_file, format_flags, format_value

logger = logging.getLogger(__name__)

REPORT_VERSION = 1

FORMAT_TEXT = "text"
FORMAT_CSV = "csv"
FORMAT_BOTH = "both"
FORMATS = (FORMAT_TEXT, FORMAT_CSV, FORMAT_BOTH)

CSV_COLUMNS = ("milestone_id", "epoch", "metric", "value", "flags")

# Row metric of a failed milestone
CSV_STATUS = "status"


def correlation_document(c: Correlation) -> Dict[str, Any]:
    return {"r": c.r, "p": c.p, "n": c.n, "significance": c.significance}


def report_document(result: TrajectoryResult) -> Dict[str, Any]:
    """
    Structured report document.
    :param result: Trajectory result.
    :return: JSON-serializable document.
    """
    document: Dict[str, Any] = {
        "report_version": REPORT_VERSION,
        "run_id": result.run_id,
        "manifest": result.manifest,
        "settings": result.settings.model_dump(),
        "k2": result.settings.k2,
        "reference_requested": result.settings.reference,
        "reference_source": result.reference_source,
        "milestones": [
            {
                "id": record.milestone_id,
                "epoch": record.epoch,
                "status": record.status,
                "error": record.error,
                "reducer": record.reducer,
                "seeds": dict(record.seeds),
                "metrics": dict(record.values),
                "flags": {metric: list(flags) for metric, flags in record.flags.items()},
            }
            for record in result.records
        ],
        "series": [
            {
                "metric": series.metric,
                "values": list(series.values),
                "flags": [list(flags) for flags in series.flags],
            }
            for series in result.series
        ],
        "correlations": [
            {
                "metric": c.metric,
                "reference": c.reference,
                "with_init": correlation_document(c.with_init),
                "without_init": correlation_document(c.without_init),
                "late": correlation_document(c.late) if c.late is not None else None,
            }
            for c in result.correlations
        ],
        "trends": [
            {
                "metric": t.metric,
                "axis": t.axis,
                "direction": t.direction,
                "correlation": correlation_document(t.correlation),
            }
            for t in result.trends
        ],
    }
    return document


def correlation_from_schema(schema: CorrelationSchema) -> Correlation:
    return Correlation(r=schema.r, p=schema.p, n=schema.n)


def result_from_document(document: Dict[str, Any]) -> TrajectoryResult:
    """
    Rebuild a trajectory result from a report document.
    :param document: Report document.
    :return: Trajectory result.
    :raises InputError: If the document is invalid.
    """
    try:
        schema = ReportSchema(**document)
        settings = EvalSettings(**schema.settings)
    except ValidationError as e:
        raise InputError(f"Invalid report: {e}")

    records = tuple(
        MilestoneRecord(
            milestone_id=m.id,
            epoch=m.epoch,
            status=m.status,
            error=m.error,
            reducer=m.reducer,
            seeds=dict(m.seeds),
            values=dict(m.metrics),
            flags={metric: tuple(flags) for metric, flags in m.flags.items()},
        )
        for m in schema.milestones
    )

    milestone_ids = tuple(record.milestone_id for record in records)
    epochs = tuple(record.epoch for record in records)

    try:
        series = tuple(
            MetricSeries(
                metric=s.metric,
                milestone_ids=milestone_ids,
                epochs=epochs,
                values=tuple(s.values),
                flags=tuple(tuple(flags) for flags in s.flags),
            )
            for s in schema.series
        )
    except ValueError as e:
        raise InputError(f"Invalid report: {e}")

    return TrajectoryResult(
        run_id=schema.run_id,
        manifest=schema.manifest,
        settings=settings,
        records=records,
        series=series,
        reference_source=schema.reference_source,
        correlations=tuple(
            CorrelationResult(
                metric=c.metric,
                reference=c.reference,
                with_init=correlation_from_schema(c.with_init),
                without_init=correlation_from_schema(c.without_init),
                late=correlation_from_schema(c.late) if c.late is not None else None,
            )
            for c in schema.correlations
        ),
        trends=tuple(
            TrendResult(metric=t.metric, axis=t.axis, correlation=correlation_from_schema(t.correlation))
            for t in schema.trends
        ),
    )


def dumps_document(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=4) + "\n"


def csv_rows(result: TrajectoryResult) -> List[List[str]]:
    rows = []
    for record in result.records:
        if not record.ok:
            rows.append([record.milestone_id, str(record.epoch), CSV_STATUS, "", record.status])
            continue
        for metric, value in record.values.items():
            rows.append([
                record.milestone_id,
                str(record.epoch),
                metric,
                format_value(value),
                format_flags(record.flags_of(metric)),
            ])
    return rows


def emit_report(result: TrajectoryResult, fmt: str = FORMAT_TEXT) -> str:
    """
    Serialize a trajectory result.
    :param result: Trajectory result.
    :param fmt: text (structured JSON) or csv (milestone_id, epoch, metric, value, flags).
    :return: Document text.
    :raises PreconditionError: If there are no milestone records.
    """
    if not result.records:
        raise PreconditionError("Cannot emit a report without milestone records")

    if fmt == FORMAT_TEXT:
        return dumps_document(report_document(result))

    if fmt == FORMAT_CSV:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        writer.writerows(csv_rows(result))
        return buffer.getvalue()

    raise PreconditionError(f"Unknown report format '{fmt}', expected one of {FORMATS[:2]}")


def parse_report(text: str) -> TrajectoryResult:
    """
    Parse a structured report.
    :param text: Report text.
    :return: Trajectory result.
    :raises InputError: If the text is not a valid report.
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"Report is not valid JSON: {e}")
    if not isinstance(document, dict):
        raise InputError("Report must be a JSON object")
    return result_from_document(document)


def load_report(path: str | Path) -> TrajectoryResult:
    """
    Load a structured report file.
    :param path: Report path.
    :return: Trajectory result.
    """
    manager = ReportManager(Path(path))
    manager.load()
    return result_from_document(manager.data)


def report_stem(run_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", run_id) or "run"


def expand_formats(fmt: str) -> Sequence[str]:
    if fmt == FORMAT_BOTH:
        return FORMAT_TEXT, FORMAT_CSV
    if fmt in (FORMAT_TEXT, FORMAT_CSV):
        return (fmt,)
    raise InputError(f"Unknown report format '{fmt}', expected one of {FORMATS}")


def write_reports(result: TrajectoryResult, out_dir: Path, fmt: str = FORMAT_BOTH) -> List[Path]:
    """
    Write report files into out_dir as <run_id>.report.json / <run_id>.report.csv.
    :param result: Trajectory result.
    :param out_dir: Output directory.
    :param fmt: text, csv or both.
    :return: Written paths.
    """
    written: List[Path] = []
    stem = report_stem(result.run_id)

    for one in expand_formats(fmt):
        if one == FORMAT_TEXT:
            path = out_dir / f"{stem}.report.json"
            ReportManager(path, report_document(result)).save()
        else:
            path = out_dir / f"{stem}.report.csv"
            out_dir.mkdir(parents=True, exist_ok=True)
            temp_path = path.with_name(path.name + ".tmp")
            with open(temp_path, "w", encoding="utf-8", newline="\n") as f:
                f.write(emit_report(result, FORMAT_CSV))
            temp_path.replace(path)

        logger.info(f"Wrote report {format_file(path)}")
        written.append(path)

    return written

