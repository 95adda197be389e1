#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from emblens.schema.ReportSchema import ReportSchema
from emblens.util.StorageManager import StorageManager
from emblens.util.errors import InputError
from emblens.util.format import format_file

logger = logging.getLogger(__name__)


class ReportManager(StorageManager):
    """
    Report manager for structured (JSON) reports.
    """

    REPORT_VERSION = 'report_version'
    RUN_ID = 'run_id'
    SETTINGS = 'settings'
    MILESTONES = 'milestones'
    SERIES = 'series'

    DEFAULT_REPORT = {
        REPORT_VERSION: 1,
        RUN_ID: "",
        SETTINGS: {},
        MILESTONES: [],
        SERIES: [],
    }

    def __init__(self, file_path: Path, data: Optional[Dict[str, Any]] = None) -> None:
        """
        Initialize report manager.
        :param file_path: Report path.
        :param data: Report document to save (None to load one).
        """
        StorageManager.__init__(self, file_path, self.DEFAULT_REPORT)
        if data is not None:
            self.data = data

    def upgrade(self) -> bool:
        """
        Upgrade data.
        :return: True if data upgraded, False otherwise.
        """
        version = self.data.get(self.REPORT_VERSION, 1)
        if version > self.DEFAULT_REPORT[self.REPORT_VERSION]:
            raise InputError(f"Report version ({version}) is newer than supported: {format_file(self.file_path)}")
        return False

    def validate(self) -> None:
        """
        Validate data.
        :raises InputError: If data is invalid.
        """
        try:
            ReportSchema(**self.data)
        except ValidationError as e:
            raise InputError(f"Invalid report {format_file(self.file_path)}: {e}")
