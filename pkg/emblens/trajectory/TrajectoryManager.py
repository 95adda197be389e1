#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple, TypeVar

from emblens.cluster.kmeans import cluster_pair
from emblens.config.EvalSettings import (
    EvalSettings,
    REDUCER_PCA,
    REDUCER_UMAP_LITE,
    REFERENCE_AUTO,
    REFERENCE_EXTERNAL,
    REFERENCE_KNN,
    REFERENCE_LINEAR,
)
from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Milestone import Milestone
from emblens.data.RunManifest import RunManifest, MilestoneDescriptor
from emblens.metrics.geometry import histogram_entropy_result, silhouette
from emblens.metrics.outliers import screen_outliers, FLAG_OUTLIER_SUSPECT
from emblens.metrics.partition import clustering_agreement, ami_vs_ground_truth
from emblens.probe.ProbeConfig import KIND_KNN, KIND_LINEAR
from emblens.probe.knn import knn_probe
from emblens.probe.linear import linear_probe
from emblens.probe.split import stratified_split
from emblens.reduce.pca import pca_fit_transform
from emblens.reduce.reducer import reduce
from emblens.store.ManifestManager import load_milestone
from emblens.trajectory.CorrelationResult import Correlation, CorrelationResult, TrendResult
from emblens.trajectory.MetricSeries import (
    MetricSeries,
    METRICS,
    AMI_GT,
    CLUSTERING_AGREEMENT,
    SILHOUETTE_GT,
    SILHOUETTE_C1,
    HISTOGRAM_ENTROPY,
    KNN_PROBE,
    LINEAR_PROBE,
    REFERENCE,
)
from emblens.trajectory.MilestoneRecord import MilestoneRecord, STATUS_FAILED
from emblens.trajectory.TrajectoryResult import TrajectoryResult
from emblens.trajectory.stats import pearson
from emblens.util.errors import EmblensError, MilestoneError, PreconditionError, UndefinedCorrelationError

logger = logging.getLogger(__name__)

T = TypeVar("T")

REDUCER_IDENTITY = "identity"

FLAG_REDUCER_FALLBACK = "reducer-fallback"

MIN_CORRELATION_POINTS = 3

REFERENCE_SOURCES = {
    REFERENCE_EXTERNAL: REFERENCE,
    REFERENCE_LINEAR: LINEAR_PROBE,
    REFERENCE_KNN: KNN_PROBE,
}

AUTO_REFERENCE_ORDER = (REFERENCE, LINEAR_PROBE, KNN_PROBE)


def reduce_milestone(e: EmbeddingSet, settings: EvalSettings) -> Tuple[EmbeddingSet, str]:
    """
    Z_3 for a milestone, falling back where the configured reducer cannot run.

    Embeddings already at target_dim pass through unchanged; the neighbour-graph
    reducer falls back to PCA when there are no more samples than n_neighbors.

    :param e: Raw embeddings.
    :param settings: Settings.
    :return: (reduced embeddings, name of the reducer that ran).
    :raises PreconditionError: If d < target_dim.
    """
    if e.d < settings.target_dim:
        raise PreconditionError(f"Embeddings have ({e.d}) dims, fewer than target_dim ({settings.target_dim})")

    if e.d == settings.target_dim:
        logger.info(f"Milestone '{e.milestone_id}' already has ({e.d}) dims, skipping reduction")
        return e, REDUCER_IDENTITY

    if settings.reducer == REDUCER_UMAP_LITE and settings.n_neighbors >= e.n:
        logger.warning(
            f"Milestone '{e.milestone_id}': n ({e.n}) <= n_neighbors ({settings.n_neighbors}), falling back to PCA"
        )
        projected = pca_fit_transform(e, settings.target_dim)
        return projected.with_values(projected.values, FLAG_REDUCER_FALLBACK), REDUCER_PCA

    return reduce(e, settings.reducer_config(e.milestone_id)), settings.reducer


def ordered(values: Dict[str, T]) -> Dict[str, T]:
    return {metric: values[metric] for metric in METRICS if metric in values}


def evaluate_milestone(m: Milestone, settings: EvalSettings) -> MilestoneRecord:
    """
    Run the metric pipeline on one milestone.

    Z_3 = reduce(Z_raw); (C_1, C_2) = k-means at k1 and 2·k1 on Z_3; then the
    clustering agreement AMI(C_1; C_2), H(Z_3) and S(Z_raw, C_1). With ground
    truth: AMI(C_1; C_GT), S(Z_raw, C_GT) and both probe accuracies.

    :param m: Milestone.
    :param settings: Settings.
    :return: Milestone record.
    :raises MilestoneError: Wrapping any failure, tagged with the milestone id.
    """
    try:
        return _evaluate_milestone(m, settings)
    except MilestoneError:
        raise
    except EmblensError as e:
        raise MilestoneError(m.id, e) from e


def _evaluate_milestone(m: Milestone, settings: EvalSettings) -> MilestoneRecord:
    raw = m.embeddings
    values: Dict[str, float] = {}
    flags: Dict[str, Tuple[str, ...]] = {}

    reduced, reducer_name = reduce_milestone(raw, settings)

    kmeans_config = settings.kmeans_config(m.id)
    c1, c2 = cluster_pair(reduced, settings.k1, kmeans_config)

    values[CLUSTERING_AGREEMENT] = clustering_agreement(c1.partition, c2.partition)
    flags[CLUSTERING_AGREEMENT] = reduced.flags

    entropy = histogram_entropy_result(reduced, settings.histogram_spec())
    values[HISTOGRAM_ENTROPY] = entropy.value
    flags[HISTOGRAM_ENTROPY] = reduced.flags + entropy.flags

    values[SILHOUETTE_C1] = silhouette(raw, c1.partition)

    seeds = {
        "reducer": settings.reducer_config(m.id).seed,
        "cluster": kmeans_config.seed,
    }

    gt = m.ground_truth
    if gt is not None:
        values[AMI_GT] = ami_vs_ground_truth(c1.partition, gt)

        if gt.non_empty() >= 2:
            values[SILHOUETTE_GT] = silhouette(raw, gt)
        else:
            logger.warning(f"Milestone '{m.id}': single ground-truth class, skipping silhouette_gt")

        probe_config = settings.probe_config(m.id, KIND_LINEAR)
        split = stratified_split(gt, probe_config.train_fraction, probe_config.seed)
        values[KNN_PROBE] = knn_probe(raw, gt, probe_config.as_kind(KIND_KNN), split)
        values[LINEAR_PROBE] = linear_probe(raw, gt, probe_config, split)
        seeds["probe"] = probe_config.seed

    if m.reference_value is not None:
        values[REFERENCE] = float(m.reference_value)

    if screen_outliers(reduced, settings.outlier_factor).size:
        for metric in values:
            flags[metric] = flags.get(metric, ()) + (FLAG_OUTLIER_SUSPECT,)

    return MilestoneRecord(
        milestone_id=m.id,
        epoch=m.epoch,
        reducer=reducer_name,
        seeds=seeds,
        values=ordered(values),
        flags={metric: tuple(sorted(set(f))) for metric, f in ordered(flags).items() if f},
    )


def build_series(records: Sequence[MilestoneRecord]) -> Tuple[MetricSeries, ...]:
    """
    One series per metric that any milestone produced, in report order.
    :param records: Records in manifest order.
    :return: Series.
    """
    series = []
    for metric in METRICS:
        if not any(metric in record.values for record in records):
            continue
        series.append(MetricSeries(
            metric=metric,
            milestone_ids=tuple(record.milestone_id for record in records),
            epochs=tuple(record.epoch for record in records),
            values=tuple(record.value(metric) for record in records),
            flags=tuple(record.flags_of(metric) for record in records),
        ))
    return tuple(series)


def resolve_reference(
        series: Sequence[MetricSeries],
        requested: str,
        ok: Optional[Sequence[bool]] = None,
) -> Optional[str]:
    """
    Metric acting as the reference series.

    Auto picks the external reference values, then the linear probe, then the
    kNN probe; a series only qualifies when every evaluated milestone has a value.

    :param series: Series.
    :param requested: auto, external, linear or knn.
    :param ok: Per-milestone success mask; failed milestones are ignored.
    :return: Metric name, or None in auto mode when nothing qualifies.
    :raises PreconditionError: If an explicitly requested reference is unavailable.
    """
    available = {s.metric for s in series if s.complete(ok)}

    if requested == REFERENCE_AUTO:
        for metric in AUTO_REFERENCE_ORDER:
            if metric in available:
                return metric
        return None

    metric = REFERENCE_SOURCES[requested]
    if metric not in available:
        raise PreconditionError(f"Reference '{requested}' requested but '{metric}' is missing for some milestone")
    return metric


def correlation(x: Sequence[float], y: Sequence[float]) -> Correlation:
    n = len(x)
    if n < MIN_CORRELATION_POINTS:
        return Correlation(r=None, p=None, n=n)
    try:
        r, p = pearson(x, y)
    except UndefinedCorrelationError:
        return Correlation(r=None, p=None, n=n)
    return Correlation(r=r, p=p, n=n)


def paired(series: MetricSeries, reference: MetricSeries, keep: Sequence[bool]) -> Tuple[List[float], List[float]]:
    x: List[float] = []
    y: List[float] = []
    for value, ref, use in zip(series.values, reference.values, keep):
        if use and value is not None and ref is not None:
            x.append(value)
            y.append(ref)
    return x, y


def correlate_run(
        series: Sequence[MetricSeries],
        reference: str = REFERENCE,
        late_from_epoch: Optional[int] = None,
) -> Tuple[CorrelationResult, ...]:
    """
    Pearson correlation of every non-reference series with the reference series.

    Computed over all milestones and again over the milestones with epoch > 0;
    with late_from_epoch set, also over the milestones with epoch >= that value.
    A variant with fewer than 3 usable points or a constant series is undefined.

    :param series: Series, all aligned to the same milestones.
    :param reference: Name of the reference series.
    :param late_from_epoch: Optional start epoch of the late variant.
    :return: One result per non-reference series.
    :raises PreconditionError: If the reference series is missing or has fewer than 3 milestones.
    """
    by_name = {s.metric: s for s in series}
    if reference not in by_name:
        raise PreconditionError(f"Reference series '{reference}' missing")

    reference_series = by_name[reference]
    if len(reference_series) < MIN_CORRELATION_POINTS:
        raise PreconditionError(f"Correlation needs >= 3 milestones, got ({len(reference_series)})")

    epochs = reference_series.epochs
    everything = [True] * len(epochs)
    trained = [epoch > 0 for epoch in epochs]
    late = [late_from_epoch is not None and epoch >= late_from_epoch for epoch in epochs]

    results = []
    for s in series:
        if s.metric == reference:
            continue

        with_init = correlation(*paired(s, reference_series, everything))
        without_init = correlation(*paired(s, reference_series, trained))
        late_correlation = correlation(*paired(s, reference_series, late)) if late_from_epoch is not None else None

        for label, c in (("w/ init", with_init), ("w/o init", without_init)):
            if c.r is None and c.n >= MIN_CORRELATION_POINTS:
                logger.warning(f"Correlation of '{s.metric}' with '{reference}' ({label}) is undefined")

        results.append(CorrelationResult(
            metric=s.metric,
            reference=reference,
            with_init=with_init,
            without_init=without_init,
            late=late_correlation,
        ))

    return tuple(results)


def epoch_trends(series: Sequence[MetricSeries]) -> Tuple[TrendResult, ...]:
    """
    Pearson r of each series against the epoch, or against milestone position when all epochs are equal.
    :param series: Series.
    :return: Trends.
    """
    trends = []
    for s in series:
        axis = "epoch" if len(set(s.epochs)) > 1 else "position"
        progress = [float(e) for e in s.epochs] if axis == "epoch" else [float(i) for i in range(len(s.epochs))]

        x = [p for p, v in zip(progress, s.values) if v is not None]
        y = [v for v in s.values if v is not None]
        trends.append(TrendResult(metric=s.metric, axis=axis, correlation=correlation(y, x)))
    return tuple(trends)


class TrajectoryManager:
    """
    Trajectory manager.
    """

    def __init__(self, settings: EvalSettings, jobs: Optional[int] = None) -> None:
        """
        Initialize trajectory manager.
        :param settings: Resolved settings.
        :param jobs: Worker count; defaults to the available parallelism.
        """
        self.settings = settings
        self.jobs = max(1, jobs if jobs is not None else (os.cpu_count() or 1))

    def evaluate_descriptor(self, index: int, total: int, descriptor: MilestoneDescriptor) -> MilestoneRecord:
        """
        Load and evaluate one milestone; failures become failed records.
        :param index: Position in the manifest.
        :param total: Milestone count.
        :param descriptor: Milestone descriptor.
        :return: Milestone record.
        """
        logger.info(f"Evaluating milestone ({index + 1}) / ({total}): '{descriptor.id}'")
        try:
            milestone = load_milestone(descriptor)
            return evaluate_milestone(milestone, self.settings)
        except EmblensError as e:
            cause = e.cause if isinstance(e, MilestoneError) and e.cause is not None else e
            logger.error(f"Milestone '{descriptor.id}' failed: {cause}")
            return MilestoneRecord(
                milestone_id=descriptor.id,
                epoch=descriptor.epoch,
                status=STATUS_FAILED,
                error=f"{type(cause).__name__}: {cause}",
            )

    def evaluate_run(self, manifest: RunManifest) -> TrajectoryResult:
        """
        Evaluate every milestone in parallel, then correlate.
        :param manifest: Run manifest.
        :return: Result in manifest order, independent of completion order.
        """
        total = len(manifest.milestones)
        logger.info(f"Evaluating ({total}) milestone(s) with ({self.jobs}) worker(s)")

        with ThreadPoolExecutor(max_workers=self.jobs) as executor:
            records = list(executor.map(
                lambda item: self.evaluate_descriptor(item[0], total, item[1]),
                enumerate(manifest.milestones),
            ))

        failed = [record for record in records if not record.ok]
        if failed:
            logger.error(f"({len(failed)}) / ({total}) milestone(s) failed")

        return self.analyze(
            run_id=manifest.run_id,
            manifest_path=str(manifest.path) if manifest.path is not None else None,
            records=records,
        )

    def analyze(
            self,
            run_id: str,
            manifest_path: Optional[str],
            records: Sequence[MilestoneRecord],
    ) -> TrajectoryResult:
        """
        Series, reference, correlations and trends from milestone records.
        :param run_id: Run id.
        :param manifest_path: Manifest path for the report.
        :param records: Records in manifest order.
        :return: Trajectory result.
        """
        ok = [record.ok for record in records]
        series = build_series(records)

        source = resolve_reference(series, self.settings.reference, ok)

        correlations: Tuple[CorrelationResult, ...] = ()
        if source is None:
            logger.info("No reference series available, emitting series only")
        else:
            logger.info(f"Reference series: '{source}'")
            reference = next(s for s in series if s.metric == source).renamed(REFERENCE)
            if source != REFERENCE:
                # external values stay in the milestone records
                series = tuple(s for s in series if s.metric != REFERENCE) + (reference,)

            compared = [s for s in series if s.metric not in (source, REFERENCE)] + [reference]
            if sum(ok) >= MIN_CORRELATION_POINTS:
                correlations = correlate_run(compared, REFERENCE, self.settings.late_from_epoch)
            else:
                logger.warning(f"Only ({sum(ok)}) evaluated milestone(s), skipping correlation")

        return TrajectoryResult(
            run_id=run_id,
            manifest=manifest_path,
            settings=self.settings,
            records=tuple(records),
            series=series,
            reference_source=source,
            correlations=correlations,
            trends=epoch_trends(series),
        )

