#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from dataclasses import dataclass

import numpy as np

from emblens.data.Partition import Partition
from emblens.util.errors import PreconditionError


@dataclass(frozen=True)
class ProbeSplit:
    """
    Disjoint train/eval index sets, both sorted.
    """

    train: np.ndarray

    eval: np.ndarray


def stratified_split(gt: Partition, train_fraction: float, seed: int) -> ProbeSplit:
    """
    Seeded split that keeps each class's train share close to train_fraction.

    Every class with at least one sample contributes one train sample; classes
    with two or more samples also keep at least one for evaluation.

    :param gt: Ground-truth partition.
    :param train_fraction: Share of each class used for training.
    :param seed: Split seed.
    :return: Split.
    :raises PreconditionError: If nothing is left to evaluate on.
    """
    rng = np.random.default_rng(seed)

    train_parts = []
    eval_parts = []
    for label in range(gt.k):
        members = np.flatnonzero(gt.assignments == label)
        if members.size == 0:
            continue
        members = rng.permutation(members)

        take = int(round(train_fraction * members.size))
        take = max(1, take)
        if members.size > 1:
            take = min(take, members.size - 1)

        train_parts.append(members[:take])
        eval_parts.append(members[take:])

    train = np.sort(np.concatenate(train_parts))
    evaluation = np.sort(np.concatenate(eval_parts))
    if evaluation.size == 0:
        raise PreconditionError(f"No samples left for evaluation (n={gt.n})")

    return ProbeSplit(train=train, eval=evaluation)
