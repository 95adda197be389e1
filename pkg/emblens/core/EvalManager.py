#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from pathlib import Path
from typing import List, Optional, Tuple

from emblens.data.RunManifest import RunManifest
from emblens.trajectory.TrajectoryManager import TrajectoryManager
from emblens.trajectory.TrajectoryResult import TrajectoryResult
from emblens.trajectory.report import write_reports, FORMAT_BOTH
from emblens.util.CliManager import CliManager
from emblens.util.errors import EvaluationError

logger = logging.getLogger(__name__)


class EvalManager:
    """
    Eval manager.
    """

    def __init__(self, cli: CliManager, trajectory: TrajectoryManager):
        """
        Initialize eval manager.
        :param cli: CLI manager.
        :param trajectory: Trajectory manager.
        """
        self.cli = cli
        self.trajectory = trajectory

    def evaluate(
            self,
            manifest: RunManifest,
            out_dir: Optional[Path] = None,
            fmt: str = FORMAT_BOTH,
    ) -> Tuple[TrajectoryResult, List[Path]]:
        """
        Evaluate a run and write its reports (next to the manifest unless out_dir is given).
        :param manifest: Run manifest.
        :param out_dir: Output directory.
        :param fmt: Report format: text, csv or both.
        :return: (result, written report paths).
        """
        self.cli.format_settings(self.trajectory.settings)

        result = self.trajectory.evaluate_run(manifest)

        if out_dir is None:
            out_dir = manifest.path.parent if manifest.path is not None else Path.cwd()

        paths = write_reports(result, out_dir, fmt)

        self.cli.format_result(result)
        return result, paths

    @staticmethod
    def exit_code(result: TrajectoryResult) -> int:
        """
        Exit status of a run: 0 if every milestone was evaluated, else the evaluation failure status.
        :param result: Trajectory result.
        :return: Exit code.
        """
        if result.failures:
            logger.error(f"Report written with ({len(result.failures)}) failed milestone(s)")
            return EvaluationError.exit_code
        return 0
