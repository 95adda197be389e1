#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from emblens.data.Milestone import Milestone
from emblens.store.ManifestManager import ManifestManager
from emblens.store.embedding_io import save_embeddings, save_partition
from emblens.util.format import format_file

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
EMBEDDINGS_SUFFIX = ".emb"
LABELS_SUFFIX = ".labels"


def write_trajectory(
        milestones: Sequence[Milestone],
        out_dir: Path,
        run_id: str,
        settings: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write milestones as binary embeddings, label files and a manifest with relative paths.
    :param milestones: Milestones.
    :param out_dir: Output directory.
    :param run_id: Run id.
    :param settings: Manifest settings block.
    :return: Manifest path.
    """
    out_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for index, milestone in enumerate(milestones):
        embeddings_name = f"{milestone.id}{EMBEDDINGS_SUFFIX}"
        save_embeddings(milestone.embeddings, out_dir / embeddings_name)

        entry: Dict[str, Any] = {
            "id": milestone.id,
            "epoch": milestone.epoch,
            "embeddings": embeddings_name,
        }

        if milestone.ground_truth is not None:
            labels_name = f"{milestone.id}{LABELS_SUFFIX}"
            save_partition(milestone.ground_truth, out_dir / labels_name)
            entry["labels"] = labels_name

        if milestone.reference_value is not None:
            entry["reference_value"] = milestone.reference_value

        entries.append(entry)
        logger.info(f"Wrote milestone ({index + 1}) / ({len(milestones)}): '{milestone.id}'")

    manifest_path = out_dir / MANIFEST_NAME
    manager = ManifestManager(manifest_path)
    manager.set_manifest(run_id, entries, settings)
    manager.save()

    logger.info(f"Wrote manifest {format_file(manifest_path)}")
    return manifest_path
