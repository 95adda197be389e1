#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from dataclasses import dataclass

import numpy as np

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.reduce.ReducerConfig import ReducerConfig, METHOD_PCA
from emblens.reduce.layout import find_ab_params, optimize_layout, scale_init
from emblens.reduce.neighbor_graph import NeighborGraph, build_neighbor_graph
from emblens.reduce.pca import pca_fit_transform
from emblens.util.errors import PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LayoutResult:
    """
    Neighbour-graph layout with its intermediate state.
    """

    embedding: EmbeddingSet

    init: np.ndarray

    graph: NeighborGraph

    a: float

    b: float


def check_reducible(e: EmbeddingSet, cfg: ReducerConfig) -> None:
    """
    Check the reduction preconditions.
    :param e: Embedding set.
    :param cfg: Reducer config.
    :raises PreconditionError: If target_dim >= d, or n_neighbors >= n for the neighbour-graph method.
    """
    if cfg.target_dim >= e.d:
        raise PreconditionError(f"target_dim ({cfg.target_dim}) must be < d ({e.d})")

    if cfg.method != METHOD_PCA and cfg.n_neighbors >= e.n:
        raise PreconditionError(f"n_neighbors ({cfg.n_neighbors}) must be < n ({e.n})")


def neighbor_graph_layout(e: EmbeddingSet, cfg: ReducerConfig) -> LayoutResult:
    """
    UMAP-style reduction: exact k-NN graph, fuzzy memberships, PCA initialization, negative-sampling layout.
    :param e: Embedding set.
    :param cfg: Reducer config.
    :return: Layout result.
    """
    check_reducible(e, cfg)

    rng = np.random.default_rng(cfg.seed)

    graph = build_neighbor_graph(e, cfg.n_neighbors)
    a, b = find_ab_params(cfg.spread, cfg.min_dist)

    init = scale_init(pca_fit_transform(e, cfg.target_dim).values, rng)

    coords = optimize_layout(
        init=init,
        weights=graph.weights,
        a=a,
        b=b,
        n_epochs=cfg.layout_epochs,
        negative_sample_rate=cfg.negative_sample_rate,
        rng=rng,
        initial_alpha=cfg.learning_rate,
    )

    return LayoutResult(embedding=e.with_values(coords), init=init, graph=graph, a=a, b=b)


def reduce(e: EmbeddingSet, cfg: ReducerConfig) -> EmbeddingSet:
    """
    Reduce embeddings to cfg.target_dim dimensions.
    :param e: Embedding set.
    :param cfg: Reducer config.
    :return: n×target_dim embedding set, same milestone id; deterministic given (e, cfg).
    :raises PreconditionError: If target_dim >= d, or n_neighbors >= n for the neighbour-graph method.
    """
    check_reducible(e, cfg)

    logger.info(f"Reducing '{e.milestone_id}' ({e.n}) x ({e.d}) -> ({cfg.target_dim}) dims via {cfg.method}")

    if cfg.method == METHOD_PCA:
        return pca_fit_transform(e, cfg.target_dim)

    return neighbor_graph_layout(e, cfg).embedding
