#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import numpy as np
import pytest

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Milestone import Milestone
from emblens.data.Partition import Partition
from emblens.util.errors import FormatError


def test_epoch_zero_is_init():
    e = EmbeddingSet(values=np.ones((2, 2)))
    assert Milestone(id="init", epoch=0, embeddings=e).is_init
    assert not Milestone(id="later", epoch=20, embeddings=e).is_init


def test_negative_epoch_rejected():
    with pytest.raises(FormatError):
        Milestone(id="m", epoch=-1, embeddings=EmbeddingSet(values=np.ones((2, 2))))


def test_ground_truth_length_must_match():
    with pytest.raises(FormatError, match="labels"):
        Milestone(
            id="m",
            epoch=0,
            embeddings=EmbeddingSet(values=np.ones((4, 2))),
            ground_truth=Partition.from_labels([2, 0]),
        )
