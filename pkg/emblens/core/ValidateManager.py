#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from emblens.cluster.KMeansConfig import DISTANCE_COSINE
from emblens.config.ConfigManager import ConfigManager
from emblens.config.EvalSettings import EvalSettings, REDUCER_UMAP_LITE
from emblens.store.ManifestManager import ManifestManager
from emblens.store.embedding_io import load_embeddings, load_partition
from emblens.util.errors import InputError

logger = logging.getLogger(__name__)

LEVEL_OK = "ok"
LEVEL_WARNING = "warning"
LEVEL_ERROR = "error"

ZERO_NORM = 1e-12


@dataclass(frozen=True)
class Diagnostic:
    """
    One validation finding.
    """

    milestone_id: Optional[str]

    level: str

    message: str


class ValidateManager:
    """
    Validate manager.
    """

    def __init__(self, overrides: Optional[Dict[str, Any]] = None) -> None:
        """
        Initialize validate manager.
        :param overrides: CLI setting overrides applied on top of the manifest settings.
        """
        self.overrides = overrides or {}
        self.settings: Optional[EvalSettings] = None

    def validate(self, manifest_path: Path) -> List[Diagnostic]:
        """
        Check a manifest and every file it references.

        Errors: unreadable or invalid manifest, unresolvable paths, malformed
        embedding or label files, label/embedding length mismatch, invalid
        settings. Warnings: zero-norm rows under cosine clustering, fewer samples
        than 2·k1, reducer fallback to PCA.

        :param manifest_path: Manifest path.
        :return: Diagnostics in manifest order.
        """
        manager = ManifestManager(manifest_path)
        try:
            manager.load()
            manifest = manager.manifest(check_paths=False)
            self.settings = ConfigManager(manifest.settings).resolve(self.overrides)
        except InputError as e:
            return [Diagnostic(milestone_id=None, level=LEVEL_ERROR, message=str(e))]

        diagnostics: List[Diagnostic] = []
        for index, descriptor in enumerate(manifest.milestones):
            logger.info(f"Validating milestone ({index + 1}) / ({len(manifest.milestones)}): '{descriptor.id}'")
            found = self.validate_milestone(descriptor.id, descriptor.embeddings, descriptor.labels, self.settings)
            diagnostics += found or [Diagnostic(milestone_id=descriptor.id, level=LEVEL_OK, message="ok")]

        return diagnostics

    def validate_milestone(
            self,
            milestone_id: str,
            embeddings_path: Path,
            labels_path: Optional[Path],
            settings: EvalSettings,
    ) -> List[Diagnostic]:
        """
        Check one milestone's files.
        :param milestone_id: Milestone id.
        :param embeddings_path: Embeddings path.
        :param labels_path: Labels path or None.
        :param settings: Resolved settings.
        :return: Diagnostics (empty when valid).
        """
        def diagnostic(level: str, message: str) -> Diagnostic:
            return Diagnostic(milestone_id=milestone_id, level=level, message=message)

        try:
            embeddings = load_embeddings(embeddings_path, milestone_id=milestone_id)
        except InputError as e:
            return [diagnostic(LEVEL_ERROR, str(e))]

        found: List[Diagnostic] = []

        if labels_path is not None:
            try:
                load_partition(labels_path, n_expected=embeddings.n)
            except InputError as e:
                found.append(diagnostic(LEVEL_ERROR, str(e)))

        if settings.distance == DISTANCE_COSINE:
            zero = np.flatnonzero(embeddings.row_norms() <= ZERO_NORM)
            if zero.size:
                found.append(diagnostic(
                    LEVEL_WARNING,
                    f"({zero.size}) zero-norm row(s) (first: {int(zero[0])}) cannot be clustered under cosine distance",
                ))

        if embeddings.n < settings.k2:
            found.append(diagnostic(LEVEL_WARNING, f"n ({embeddings.n}) < k2 ({settings.k2})"))

        if settings.reducer == REDUCER_UMAP_LITE and settings.n_neighbors >= embeddings.n:
            found.append(diagnostic(
                LEVEL_WARNING,
                f"n ({embeddings.n}) <= n_neighbors ({settings.n_neighbors}), reducer falls back to PCA",
            ))

        if embeddings.d < settings.target_dim:
            found.append(diagnostic(LEVEL_ERROR, f"d ({embeddings.d}) < target_dim ({settings.target_dim})"))

        return found


def is_valid(diagnostics: List[Diagnostic]) -> bool:
    return all(d.level != LEVEL_ERROR for d in diagnostics)
