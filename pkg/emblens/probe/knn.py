#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
from typing import Optional

import numpy as np

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.probe.ProbeConfig import ProbeConfig, KIND_KNN
from emblens.probe.split import ProbeSplit, stratified_split
from emblens.util.errors import PreconditionError, ConfigError

logger = logging.getLogger(__name__)

ZERO_NORM = 1e-12

CHUNK = 1024


def unit_rows(e: EmbeddingSet) -> np.ndarray:
    """
    Rows scaled to unit norm.
    :param e: Embedding set.
    :return: (n, d) matrix.
    :raises PreconditionError: If a row has zero norm.
    """
    norms = e.row_norms()
    zero = np.flatnonzero(norms <= ZERO_NORM)
    if zero.size:
        raise PreconditionError(f"Zero-norm row ({int(zero[0])}) in '{e.milestone_id}' has no cosine similarity")
    return e.values.astype(np.float64) / norms[:, None]


def check_train_classes(gt: Partition, split: ProbeSplit) -> None:
    present = set(np.unique(gt.assignments).tolist())
    trained = set(np.unique(gt.assignments[split.train]).tolist())
    missing = sorted(present - trained)
    if missing:
        raise PreconditionError(f"Class(es) {missing} absent from the probe train split")


def knn_predict(train: np.ndarray, train_labels: np.ndarray, queries: np.ndarray, knn_k: int, k: int) -> np.ndarray:
    """
    Majority vote among the knn_k most cosine-similar train rows.

    Neighbours are ranked by similarity, then by train index; vote ties go to the smallest class.

    :param train: Unit train rows.
    :param train_labels: Train labels.
    :param queries: Unit query rows.
    :param knn_k: Neighbour count (<= train size).
    :param k: Class count.
    :return: Predicted labels.
    """
    predictions = np.empty(queries.shape[0], dtype=np.int64)

    for start in range(0, queries.shape[0], CHUNK):
        stop = min(start + CHUNK, queries.shape[0])
        similarities = queries[start:stop] @ train.T
        neighbours = np.argsort(-similarities, axis=1, kind="stable")[:, :knn_k]

        votes = np.zeros((stop - start, k), dtype=np.int64)
        rows = np.arange(stop - start)
        for column in range(knn_k):
            votes[rows, train_labels[neighbours[:, column]]] += 1

        predictions[start:stop] = np.argmax(votes, axis=1)

    return predictions


def knn_probe(e: EmbeddingSet, gt: Partition, cfg: ProbeConfig, split: Optional[ProbeSplit] = None) -> float:
    """
    kNN probe accuracy on the eval split.
    :param e: Embedding set.
    :param gt: Ground-truth partition.
    :param cfg: Probe config (kind must be knn).
    :param split: Train/eval split; defaults to the seeded stratified split.
    :return: Accuracy in [0, 1].
    :raises PreconditionError: On zero-norm rows, a class missing from the train split, or length mismatch.
    """
    if cfg.kind != KIND_KNN:
        raise ConfigError(f"knn_probe called with kind '{cfg.kind}'")
    if gt.n != e.n:
        raise PreconditionError(f"({gt.n}) labels for ({e.n}) embeddings")

    if split is None:
        split = stratified_split(gt, cfg.train_fraction, cfg.seed)
    check_train_classes(gt, split)

    points = unit_rows(e)

    knn_k = cfg.knn_k
    if knn_k > split.train.size:
        logger.warning(f"knn_k ({knn_k}) exceeds the train split ({split.train.size}), using ({split.train.size})")
        knn_k = int(split.train.size)

    predictions = knn_predict(
        train=points[split.train],
        train_labels=gt.assignments[split.train],
        queries=points[split.eval],
        knn_k=knn_k,
        k=gt.k,
    )
    accuracy = float(np.mean(predictions == gt.assignments[split.eval]))

    logger.debug(f"kNN probe on '{e.milestone_id}': k=({knn_k}), accuracy={accuracy:.4f}")
    return accuracy
