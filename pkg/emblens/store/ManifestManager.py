#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from emblens.data.Milestone import Milestone
from emblens.data.RunManifest import RunManifest, MilestoneDescriptor
from emblens.schema.ManifestSchema import ManifestSchema
from emblens.store.embedding_io import load_embeddings, load_partition
from emblens.util.StorageManager import StorageManager
from emblens.util.errors import ManifestError, FormatError
from emblens.util.format import format_file

logger = logging.getLogger(__name__)


class ManifestManager(StorageManager):
    """
    Manifest manager.
    """

    error_class = ManifestError

    MANIFEST_VERSION = 'manifest_version'
    RUN_ID = 'run_id'
    MILESTONES = 'milestones'
    SETTINGS = 'settings'

    DEFAULT_MANIFEST = {
        MANIFEST_VERSION: 2,
        RUN_ID: "",
        MILESTONES: [],
        SETTINGS: {},
    }

    def __init__(self, file_path: Path) -> None:
        """
        Initialize manifest manager.
        :param file_path: Manifest path.
        """
        StorageManager.__init__(self, file_path, self.DEFAULT_MANIFEST)

    def upgrade(self) -> bool:
        """
        Upgrade data.
        :return: True if data upgraded, False otherwise.
        """
        upgraded = False

        version = self.data.get(self.MANIFEST_VERSION, 1)

        if version < 2:
            logger.warning(f"Upgrading manifest (v2): {format_file(self.file_path)}")
            self.data[self.MANIFEST_VERSION] = 2
            self.data.setdefault(self.SETTINGS, {})
            upgraded = True

        return upgraded

    def validate(self) -> None:
        """
        Validate data: schema, unique ids, non-decreasing epochs.
        :raises ManifestError: If data is invalid.
        """
        try:
            schema = ManifestSchema(**self.data)
        except ValidationError as e:
            raise ManifestError(f"Invalid manifest {format_file(self.file_path)}: {e}")

        if len(schema.milestones) == 0:
            raise ManifestError(f"No milestones in {format_file(self.file_path)}")

        seen = set()
        for milestone in schema.milestones:
            if milestone.id in seen:
                raise ManifestError(f"Duplicate milestone id '{milestone.id}' in {format_file(self.file_path)}")
            seen.add(milestone.id)

        for previous, current in zip(schema.milestones, schema.milestones[1:]):
            if current.epoch < previous.epoch:
                raise ManifestError(
                    f"Decreasing epochs in {format_file(self.file_path)}: "
                    f"'{previous.id}' ({previous.epoch}) before '{current.id}' ({current.epoch})"
                )

    def resolve_path(self, relative: str) -> Path:
        """
        Resolve a manifest path relative to the manifest's directory.
        :param relative: Path as written in the manifest.
        :return: Resolved path.
        """
        path = Path(os.path.expanduser(relative))
        if not path.is_absolute():
            path = self.file_path.parent / path
        return path

    def manifest(self, check_paths: bool = True) -> RunManifest:
        """
        Build the run manifest from loaded data.
        :param check_paths: Require every referenced file to exist.
        :return: Run manifest.
        :raises ManifestError: If a path does not resolve.
        """
        descriptors: List[MilestoneDescriptor] = []

        for entry in self.data[self.MILESTONES]:
            embeddings = self.resolve_path(entry['embeddings'])
            labels = self.resolve_path(entry['labels']) if entry.get('labels') else None

            if check_paths:
                for path in [embeddings] + ([labels] if labels is not None else []):
                    if not path.is_file():
                        raise ManifestError(f"Milestone '{entry['id']}': unresolvable path {format_file(path)}")

            descriptors.append(MilestoneDescriptor(
                id=entry['id'],
                epoch=int(entry['epoch']),
                embeddings=embeddings,
                labels=labels,
                reference_value=entry.get('reference_value'),
            ))

        return RunManifest(
            run_id=self.data[self.RUN_ID],
            milestones=tuple(descriptors),
            settings=dict(self.data.get(self.SETTINGS, {})),
            path=self.file_path,
        )

    def set_manifest(self, run_id: str, milestones: List[Dict[str, Any]], settings: Optional[Dict[str, Any]]) -> None:
        """
        Replace manifest data (paths relative to the manifest directory).
        :param run_id: Run id.
        :param milestones: Milestone entries.
        :param settings: Settings block.
        """
        self.data = {
            self.MANIFEST_VERSION: self.DEFAULT_MANIFEST[self.MANIFEST_VERSION],
            self.RUN_ID: run_id,
            self.MILESTONES: milestones,
            self.SETTINGS: settings or {},
        }


def load_manifest(path: str | Path) -> RunManifest:
    """
    Load and validate a run manifest.
    :param path: Manifest path.
    :return: Run manifest.
    :raises ManifestError: If the manifest is invalid or references missing files.
    """
    manager = ManifestManager(Path(path))
    manager.load()
    manifest = manager.manifest()
    logger.info(f"Loaded manifest '{manifest.run_id}' with ({len(manifest.milestones)}) milestone(s)")
    return manifest


def load_milestone(descriptor: MilestoneDescriptor) -> Milestone:
    """
    Load a milestone's embeddings and optional labels.
    :param descriptor: Milestone descriptor.
    :return: Milestone.
    :raises FormatError: If a file is malformed or embeddings and labels disagree in length.
    """
    embeddings = load_embeddings(descriptor.embeddings, milestone_id=descriptor.id)

    ground_truth = None
    if descriptor.labels is not None:
        ground_truth = load_partition(descriptor.labels, n_expected=embeddings.n)

    try:
        return Milestone(
            id=descriptor.id,
            epoch=descriptor.epoch,
            embeddings=embeddings,
            ground_truth=ground_truth,
            reference_value=descriptor.reference_value,
        )
    except FormatError as e:
        raise FormatError(f"{format_file(descriptor.embeddings)}: {e}")
