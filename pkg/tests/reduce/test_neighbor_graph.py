#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import numpy as np
import pytest

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.reduce.neighbor_graph import build_neighbor_graph
from emblens.util.errors import PreconditionError


def test_collinear_neighbors():
    e = EmbeddingSet(values=[[0.0], [1.0], [2.0], [10.0]])
    graph = build_neighbor_graph(e, 2)

    assert set(graph.indices[0].tolist()) == {1, 2}
    assert graph.indices[3].tolist() == [2, 1]


def test_rho_is_nearest_distance():
    e = EmbeddingSet(values=np.random.default_rng(0).standard_normal((30, 5)))
    graph = build_neighbor_graph(e, 5)
    assert np.array_equal(graph.rhos, graph.distances[:, 0])


def test_neighbors_match_full_sort():
    values = np.random.default_rng(1).standard_normal((30, 5))
    graph = build_neighbor_graph(EmbeddingSet(values=values), 7)

    for i in range(30):
        distances = [(float(np.linalg.norm(values[i] - values[j])), j) for j in range(30) if j != i]
        expected = [j for _, j in sorted(distances)[:7]]
        assert graph.indices[i].tolist() == expected


def test_memberships_symmetric_and_bounded():
    e = EmbeddingSet(values=np.random.default_rng(2).standard_normal((40, 4)))
    weights = build_neighbor_graph(e, 6).weights.toarray()

    assert np.allclose(weights, weights.T)
    assert weights.max() <= 1.0 + 1e-12
    assert weights[weights > 0].min() > 0
    assert np.all(np.diag(weights) == 0)


def test_nearest_neighbor_has_full_membership():
    e = EmbeddingSet(values=np.random.default_rng(3).standard_normal((25, 3)))
    graph = build_neighbor_graph(e, 5)
    weights = graph.weights.toarray()

    for i in range(25):
        assert weights[i, graph.indices[i, 0]] == pytest.approx(1.0)


def test_too_few_samples():
    with pytest.raises(PreconditionError):
        build_neighbor_graph(EmbeddingSet(values=np.ones((5, 2))), 5)
