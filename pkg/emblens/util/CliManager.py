#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from dataclasses import asdict
from typing import Any, Dict, Optional, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.pretty import Pretty
from rich.table import Table
from rich.text import Text

from emblens.config.EvalSettings import EvalSettings
from emblens.trajectory.CorrelationResult import Correlation, NEGATIVE, NOT_SIGNIFICANT, UNDEFINED
from emblens.trajectory.TrajectoryResult import TrajectoryResult
from emblens.util.format import format_flags

logger = logging.getLogger(__name__)


class CliManager:
    """
    CLI manager.
    """

    VERBOSE_SERIES: bool = True

    # Significance colours: grey for not significant, red for negative
    STYLES = {
        NOT_SIGNIFICANT: "grey50",
        UNDEFINED: "grey50",
        NEGATIVE: "red",
    }

    def __init__(self, console: Optional[Console] = None):
        """
        Initialize CLI manager.
        :param console: Console (defaults to stdout).
        """
        self.console = console if console is not None else Console(markup=False)

    def format_settings(self, settings: EvalSettings) -> None:
        """
        Format fully resolved settings.
        :param settings: Settings.
        """
        data: Dict[str, Any] = settings.model_dump()
        data["k2"] = settings.k2
        self.console.print(Panel(Pretty(data, expand_all=True), title="Settings", style="blue", border_style="blue"))

    def format_config(self, title: str, config: Any) -> None:
        """
        Format a dataclass config.
        :param title: Panel title.
        :param config: Dataclass instance.
        """
        self.console.print(
            Panel(Pretty(asdict(config), expand_all=True), title=title, style="blue", border_style="blue")
        )

    def format_cell(self, c: Optional[Correlation]) -> str:
        if c is None:
            return "-"
        if c.r is None:
            return f"undefined (n={c.n})"
        return f"{c.r:+.3f} (p={c.p:.3g}, n={c.n})"

    def format_number(self, value: Optional[float]) -> str:
        return "-" if value is None else f"{value:.4f}"

    def style_of(self, c: Optional[Correlation]) -> str:
        if c is None:
            return ""
        return self.STYLES.get(c.significance, "")

    def format_correlations(self, result: TrajectoryResult) -> None:
        """
        Format the correlation table: grey cells are not significant (p >= 0.05), red ones negative.
        :param result: Trajectory result.
        """
        if not result.correlations:
            logger.info("No correlation table (no reference series)")
            return

        late = result.settings.late_from_epoch is not None

        table = Table(title=f"Correlation with reference '{result.reference_source}'")
        table.add_column("metric")
        table.add_column("w/ init")
        table.add_column("w/o init")
        if late:
            table.add_column(f"epoch >= {result.settings.late_from_epoch}")

        for c in result.correlations:
            cells = [
                c.metric,
                self.format_cell(c.with_init),
                self.format_cell(c.without_init),
            ]
            styles = ["", self.style_of(c.with_init), self.style_of(c.without_init)]
            if late:
                cells.append(self.format_cell(c.late))
                styles.append(self.style_of(c.late))
            table.add_row(*[Text(cell, style=style) for cell, style in zip(cells, styles)])

        self.console.print(table)

    def format_series(self, result: TrajectoryResult) -> None:
        """
        Format metric values per milestone.
        :param result: Trajectory result.
        """
        if not CliManager.VERBOSE_SERIES:
            return

        table = Table(title=f"Run '{result.run_id}'")
        table.add_column("milestone")
        table.add_column("epoch", justify="right")
        for series in result.series:
            table.add_column(series.metric, justify="right")
        table.add_column("flags")

        for index, record in enumerate(result.records):
            if not record.ok:
                row = [record.milestone_id, str(record.epoch)] + ["failed"] * len(result.series) + [""]
            else:
                row = [record.milestone_id, str(record.epoch)]
                row += [self.format_number(s.values[index]) for s in result.series]
                row.append(format_flags(flag for flags in record.flags.values() for flag in flags))
            table.add_row(*row)

        self.console.print(table)

    def format_trends(self, result: TrajectoryResult) -> None:
        """
        Format metric trends over training.
        :param result: Trajectory result.
        """
        for trend in result.trends:
            logger.info(
                f"Trend of '{trend.metric}' over {trend.axis}: {trend.direction} "
                f"({self.format_cell(trend.correlation)})"
            )

    def format_diagnostics(self, diagnostics: Sequence[Any]) -> None:
        """
        Format validation diagnostics.
        :param diagnostics: Diagnostics with `milestone_id`, `level` and `message`.
        """
        table = Table(title="Validation")
        table.add_column("milestone")
        table.add_column("level")
        table.add_column("message")
        for diagnostic in diagnostics:
            table.add_row(diagnostic.milestone_id or "-", diagnostic.level, diagnostic.message)
        self.console.print(table)

    def format_result(self, result: TrajectoryResult) -> None:
        """
        Format series, correlation table and trends.
        :param result: Trajectory result.
        """
        self.format_series(result)
        self.format_correlations(result)
        self.format_trends(result)

    def format_probe(self, accuracies: Dict[str, float]) -> None:
        """
        Format probe accuracies.
        :param accuracies: Accuracy per probe kind.
        """
        self.console.print(
            Panel(Pretty(accuracies, expand_all=True), title="Probe accuracy", style="green", border_style="green")
        )
