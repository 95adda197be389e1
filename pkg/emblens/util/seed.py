#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import hashlib
import os
from typing import Optional

import numpy as np

from emblens.util.errors import ConfigError

SEED_ENV = "EMBLENS_SEED"

DEFAULT_SEED = 0


def derive_seed(seed: int, *components: str | int) -> int:
    """
    Derive a 64-bit component seed from a global seed.

    The derivation hashes the global seed together with the component names,
    so one global seed reproduces every stream and distinct components get
    unrelated streams.

    :param seed: Global seed.
    :param components: Component names (e.g. "reducer", milestone id).
    :return: Unsigned 64-bit seed.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed)).encode("utf-8"))
    for component in components:
        h.update(b"/")
        h.update(str(component).encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


def make_rng(seed: int, *components: str | int) -> np.random.Generator:
    """
    Seeded numpy generator for a component.
    :param seed: Global seed.
    :param components: Component names.
    :return: Generator.
    """
    return np.random.default_rng(derive_seed(seed, *components))


def seed_from_env(fallback: Optional[int] = None) -> Optional[int]:
    """
    Read the default seed from the environment.
    :param fallback: Returned when the variable is unset.
    :return: Seed or fallback.
    :raises ConfigError: If the variable is set but not an integer.
    """
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return fallback
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got '{raw}'")
