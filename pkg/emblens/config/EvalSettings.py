#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from emblens.cluster.KMeansConfig import KMeansConfig
from emblens.metrics.HistogramGrid import HistogramSpec
from emblens.probe.ProbeConfig import ProbeConfig
from emblens.reduce.ReducerConfig import ReducerConfig, METHOD_PCA, METHOD_NEIGHBOR_GRAPH
from emblens.util.seed import derive_seed

REDUCER_PCA = "pca"
REDUCER_UMAP_LITE = "umap-lite"

REFERENCE_AUTO = "auto"
REFERENCE_KNN = "knn"
REFERENCE_LINEAR = "linear"
REFERENCE_EXTERNAL = "external"


class EvalSettings(BaseModel):
    """
    Fully resolved evaluation settings, embedded in every report.
    """

    k1: int = Field(default=10, ge=1)
    distance: Literal["cosine", "euclidean"] = "cosine"
    n_restarts: int = Field(default=10, ge=1)
    max_iters: int = Field(default=300, ge=1)
    tol: float = Field(default=1e-6, ge=0)

    reducer: Literal["pca", "umap-lite"] = REDUCER_UMAP_LITE
    target_dim: int = Field(default=3, ge=1)
    n_neighbors: int = Field(default=50, ge=2)
    layout_epochs: int = Field(default=200, ge=1)
    min_dist: float = Field(default=0.1, ge=0)
    spread: float = Field(default=1.0, gt=0)
    negative_sample_rate: int = Field(default=5, ge=0)

    sigma_factor: float = Field(default=0.4, gt=0)
    pretrained: bool = False

    reference: Literal["auto", "knn", "linear", "external"] = REFERENCE_AUTO
    knn_k: int = Field(default=20, ge=1)
    train_fraction: float = Field(default=0.5, gt=0, lt=1)
    probe_epochs: int = Field(default=200, ge=1)
    probe_learning_rate: float = Field(default=0.5, gt=0)
    probe_l2: float = Field(default=1e-4, ge=0)

    outlier_factor: float = Field(default=10.0, gt=0)
    late_from_epoch: Optional[int] = Field(default=None, ge=0)

    seed: int = 0

    model_config = ConfigDict(extra='forbid', frozen=True)  # Ensures additionalProperties: false

    @property
    def k2(self) -> int:
        return 2 * self.k1

    def reducer_config(self, milestone_id: str) -> ReducerConfig:
        """
        Reducer config for a milestone.
        :param milestone_id: Milestone id.
        :return: Reducer config.
        """
        return ReducerConfig(
            method=METHOD_PCA if self.reducer == REDUCER_PCA else METHOD_NEIGHBOR_GRAPH,
            target_dim=self.target_dim,
            n_neighbors=self.n_neighbors,
            layout_epochs=self.layout_epochs,
            min_dist=self.min_dist,
            spread=self.spread,
            negative_sample_rate=self.negative_sample_rate,
            seed=derive_seed(self.seed, "reducer", milestone_id),
        )

    def kmeans_config(self, milestone_id: str) -> KMeansConfig:
        """
        k-means config (k = k1) for a milestone.
        :param milestone_id: Milestone id.
        :return: k-means config.
        """
        return KMeansConfig(
            k=self.k1,
            distance=self.distance,
            n_restarts=self.n_restarts,
            max_iters=self.max_iters,
            tol=self.tol,
            seed=derive_seed(self.seed, "cluster", milestone_id),
        )

    def histogram_spec(self) -> HistogramSpec:
        return HistogramSpec(sigma_factor=self.sigma_factor, dimensions=self.target_dim)

    def probe_config(self, milestone_id: str, kind: str) -> ProbeConfig:
        """
        Probe config for a milestone.
        :param milestone_id: Milestone id.
        :param kind: Probe kind.
        :return: Probe config.
        """
        return ProbeConfig(
            kind=kind,
            knn_k=self.knn_k,
            train_fraction=self.train_fraction,
            epochs=self.probe_epochs,
            learning_rate=self.probe_learning_rate,
            l2=self.probe_l2,
            seed=derive_seed(self.seed, "probe", milestone_id),
        )
