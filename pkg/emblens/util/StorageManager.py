#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
import json
import shutil
from pathlib import Path
from copy import deepcopy
from typing import Dict, Any, Optional, Type
from abc import ABC, abstractmethod

from emblens.util.errors import InputError
from emblens.util.format import format_file

logger = logging.getLogger(__name__)


class StorageManager(ABC):
    """
    Storage manager for versioned JSON documents.
    """

    error_class: Type[InputError] = InputError

    def __init__(self, file_path: Path, default: Optional[Dict[str, Any]] = None) -> None:
        """
        Initialize storage manager.
        :param file_path: File path.
        :param default: Default data (also defines the required keys).
        """
        self.file_path = Path(file_path)
        self.default = deepcopy(default) if default is not None else {}

        self.data: Dict[str, Any] = deepcopy(self.default)

    def load(self) -> None:
        """
        Load file.
        :raises InputError: If the file is missing, unparsable, incomplete or invalid.
        """
        if not self.file_path.is_file():
            raise self.error_class(f"No such file: {format_file(self.file_path)}")

        try:
            with open(self.file_path, "r", encoding="utf-8") as f:
                self.data = json.load(f)
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as e:
            raise self.error_class(f"Failed to load {format_file(self.file_path)}: {e}")

        if not isinstance(self.data, dict):
            raise self.error_class(f"Expected a JSON object in {format_file(self.file_path)}")

        upgraded = self.upgrade()

        missing_keys = self.default.keys() - self.data.keys()
        if missing_keys:
            raise self.error_class(f"Missing keys in {format_file(self.file_path)}: {sorted(missing_keys)}")

        self.validate()

        logger.debug(f"Loaded existing {format_file(self.file_path)}")

        if upgraded:
            logger.debug(f"Upgraded {format_file(self.file_path)} in memory")

    def dumps(self) -> str:
        """
        Serialize data deterministically.
        :return: JSON text with trailing newline.
        """
        return json.dumps(self.data, indent=4) + "\n"

    def save(self) -> None:
        """
        Save file (atomic write).
        :raises InputError: If the data is invalid.
        """
        self.validate()

        self.file_path.parent.mkdir(parents=True, exist_ok=True)

        temp_path = self.file_path.with_suffix(".tmp")
        with open(temp_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.dumps())
        shutil.move(temp_path, self.file_path)

        logger.debug(f"Saved {format_file(self.file_path)}")

    @abstractmethod
    def upgrade(self) -> bool:
        """
        Upgrade data.
        :return: True if data upgraded, False otherwise.
        """
        raise NotImplementedError

    @abstractmethod
    def validate(self) -> None:
        """
        Validate data.
        :raises InputError: If data is invalid.
        """
        raise NotImplementedError
