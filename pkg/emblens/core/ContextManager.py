#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from pathlib import Path
from typing import Any, Dict, Optional

from emblens.util.CliManager import CliManager
from emblens.config.ConfigManager import ConfigManager
from emblens.store.ManifestManager import load_manifest
from emblens.trajectory.TrajectoryManager import TrajectoryManager
from emblens.core.EvalManager import EvalManager


class ContextManager:
    """
    Context manager.
    """

    def __init__(
            self,
            manifest_path: Path,
            overrides: Optional[Dict[str, Any]] = None,
            jobs: Optional[int] = None,
            cli: Optional[CliManager] = None,
    ):
        """
        Initialize context manager.
        :param manifest_path: Run manifest path.
        :param overrides: CLI setting overrides.
        :param jobs: Worker count.
        :param cli: CLI manager.
        """
        self.cli = cli if cli is not None else CliManager()

        self.manifest = load_manifest(manifest_path)

        self.config = ConfigManager(self.manifest.settings)

        self.settings = self.config.resolve(overrides)

        self.trajectory = TrajectoryManager(self.settings, jobs=jobs)

        self.evaluator = EvalManager(self.cli, self.trajectory)
