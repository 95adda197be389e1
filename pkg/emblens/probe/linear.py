#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

"""
Linear probe: multinomial logistic regression on frozen embeddings.

Features are standardized on the train split and scaled by 1/sqrt(d), with a
constant bias column, so full-batch descent at the default rate is stable.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp, softmax

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.probe.ProbeConfig import ProbeConfig, KIND_LINEAR
from emblens.probe.knn import check_train_classes
from emblens.probe.split import ProbeSplit, stratified_split
from emblens.util.errors import ConfigError, DivergenceError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearProbeModel:
    """
    Trained probe: weights over [standardized features, 1] plus the loss per epoch.
    """

    weights: np.ndarray  # (d + 1, k)

    mean: np.ndarray

    scale: np.ndarray

    losses: Tuple[float, ...]

    def features(self, values: np.ndarray) -> np.ndarray:
        return design_matrix(values, self.mean, self.scale)

    def predict(self, values: np.ndarray) -> np.ndarray:
        return np.argmax(self.features(values) @ self.weights, axis=1)


def design_matrix(values: np.ndarray, mean: np.ndarray, scale: np.ndarray) -> np.ndarray:
    standardized = (values.astype(np.float64) - mean) / scale
    return np.hstack([standardized, np.ones((values.shape[0], 1))])


def fit_standardization(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    return mean, std * math.sqrt(values.shape[1])


def softmax_loss_and_gradient(
        weights: np.ndarray,
        features: np.ndarray,
        targets: np.ndarray,
        l2: float,
) -> Tuple[float, np.ndarray]:
    """
    Mean softmax cross-entropy plus (l2 / 2)·‖W‖², and its gradient.
    :param weights: (f, k) weights.
    :param features: (n, f) design matrix.
    :param targets: (n, k) one-hot targets.
    :param l2: L2 penalty.
    :return: (loss, gradient of shape (f, k)).
    """
    n = features.shape[0]
    logits = features @ weights

    log_normalizer = logsumexp(logits, axis=1)
    loss = float(np.sum(log_normalizer - np.sum(logits * targets, axis=1)) / n)
    loss += 0.5 * l2 * float(np.sum(weights * weights))

    probabilities = softmax(logits, axis=1)
    gradient = features.T @ (probabilities - targets) / n + l2 * weights
    return loss, gradient


def cosine_rate(learning_rate: float, epoch: int, epochs: int) -> float:
    return 0.5 * learning_rate * (1.0 + math.cos(math.pi * epoch / epochs))


def train_linear_probe(values: np.ndarray, labels: np.ndarray, k: int, cfg: ProbeConfig) -> LinearProbeModel:
    """
    Full-batch gradient descent from zero weights with a cosine-decayed rate.
    :param values: Train embeddings.
    :param labels: Train labels in [0, k).
    :param k: Class count.
    :param cfg: Probe config.
    :return: Trained model.
    :raises DivergenceError: If the loss becomes non-finite.
    """
    mean, scale = fit_standardization(values.astype(np.float64))
    features = design_matrix(values, mean, scale)

    targets = np.zeros((labels.shape[0], k))
    targets[np.arange(labels.shape[0]), labels] = 1.0

    weights = np.zeros((features.shape[1], k))
    losses = []
    for epoch in range(cfg.epochs):
        loss, gradient = softmax_loss_and_gradient(weights, features, targets, cfg.l2)
        if not math.isfinite(loss):
            raise DivergenceError(epoch=epoch, loss=loss)
        losses.append(loss)
        weights = weights - cosine_rate(cfg.learning_rate, epoch, cfg.epochs) * gradient

    return LinearProbeModel(weights=weights, mean=mean, scale=scale, losses=tuple(losses))


def linear_probe(e: EmbeddingSet, gt: Partition, cfg: ProbeConfig, split: Optional[ProbeSplit] = None) -> float:
    """
    Linear probe top-1 accuracy on the eval split.
    :param e: Embedding set.
    :param gt: Ground-truth partition.
    :param cfg: Probe config (kind must be linear).
    :param split: Train/eval split; defaults to the seeded stratified split.
    :return: Accuracy in [0, 1].
    :raises DivergenceError: If training diverges.
    """
    if cfg.kind != KIND_LINEAR:
        raise ConfigError(f"linear_probe called with kind '{cfg.kind}'")
    if gt.n != e.n:
        raise PreconditionError(f"({gt.n}) labels for ({e.n}) embeddings")

    if split is None:
        split = stratified_split(gt, cfg.train_fraction, cfg.seed)
    check_train_classes(gt, split)

    model = train_linear_probe(e.values[split.train], gt.assignments[split.train], gt.k, cfg)
    predictions = model.predict(e.values[split.eval])
    accuracy = float(np.mean(predictions == gt.assignments[split.eval]))

    logger.debug(
        f"Linear probe on '{e.milestone_id}': loss {model.losses[0]:.4f} -> {model.losses[-1]:.4f}, "
        f"accuracy={accuracy:.4f}"
    )
    return accuracy
