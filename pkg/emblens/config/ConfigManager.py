#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from copy import deepcopy
from typing import Any, Dict, Optional

from pydantic import ValidationError

from emblens.config.EvalSettings import EvalSettings, REDUCER_UMAP_LITE
from emblens.util.errors import ConfigError
from emblens.util.seed import seed_from_env, DEFAULT_SEED

logger = logging.getLogger(__name__)


class ConfigManager:
    """
    Config manager.

    Resolves settings in layers: defaults < manifest settings < EMBLENS_SEED < CLI overrides.
    """

    K1 = 'k1'
    DISTANCE = 'distance'
    REDUCER = 'reducer'
    NEIGHBORS = 'n_neighbors'
    SIGMA_FACTOR = 'sigma_factor'
    PRETRAINED = 'pretrained'
    REFERENCE = 'reference'
    SEED = 'seed'

    # Manifest spelling of sigma_factor
    BIN_SIGMA_FACTOR = 'bin_sigma_factor'

    SIGMA_FACTOR_PRETRAINED = 0.8

    # Alternative spelling of the neighbour-graph reducer
    REDUCER_ALIASES = {
        'neighbor-graph': REDUCER_UMAP_LITE,
        'umap': REDUCER_UMAP_LITE,
    }

    DEFAULT_CONFIG: Dict[str, Any] = EvalSettings().model_dump()

    def __init__(self, manifest_settings: Optional[Dict[str, Any]] = None) -> None:
        """
        Initialize config manager.
        :param manifest_settings: `settings` block of the run manifest (may be None).
        """
        self.manifest_settings = self.normalize(manifest_settings or {})

    @classmethod
    def normalize(cls, settings: Dict[str, Any]) -> Dict[str, Any]:
        """
        Map manifest spellings to setting names.
        :param settings: Raw settings.
        :return: Normalized copy.
        """
        data = deepcopy(settings)

        if cls.BIN_SIGMA_FACTOR in data:
            if cls.SIGMA_FACTOR in data and data[cls.SIGMA_FACTOR] != data[cls.BIN_SIGMA_FACTOR]:
                raise ConfigError(f"Conflicting '{cls.BIN_SIGMA_FACTOR}' and '{cls.SIGMA_FACTOR}'")
            data[cls.SIGMA_FACTOR] = data.pop(cls.BIN_SIGMA_FACTOR)

        reducer = data.get(cls.REDUCER)
        if isinstance(reducer, str):
            data[cls.REDUCER] = cls.REDUCER_ALIASES.get(reducer, reducer)

        return data

    def resolve(self, overrides: Optional[Dict[str, Any]] = None) -> EvalSettings:
        """
        Resolve the effective settings.
        :param overrides: CLI overrides; None values are ignored.
        :return: Resolved settings.
        :raises ConfigError: If any value is invalid.
        """
        overrides = self.normalize({key: value for key, value in (overrides or {}).items() if value is not None})

        data = deepcopy(self.DEFAULT_CONFIG)
        data.update(self.manifest_settings)

        if self.SEED not in self.manifest_settings:
            data[self.SEED] = seed_from_env(DEFAULT_SEED)

        data.update(overrides)

        sigma_explicit = self.SIGMA_FACTOR in self.manifest_settings or self.SIGMA_FACTOR in overrides
        if data.get(self.PRETRAINED) and not sigma_explicit:
            data[self.SIGMA_FACTOR] = self.SIGMA_FACTOR_PRETRAINED

        try:
            settings = EvalSettings(**data)
        except ValidationError as e:
            raise ConfigError(f"Invalid settings: {e}")

        logger.debug(f"Resolved settings: {settings.model_dump()}")
        return settings
