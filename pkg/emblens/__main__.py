#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import typer
import logging
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

from emblens.core.ContextManager import ContextManager
from emblens.core.EvalManager import EvalManager
from emblens.core.ValidateManager import ValidateManager, is_valid
from emblens.data.Partition import Partition
from emblens.probe.ProbeConfig import ProbeConfig, KIND_KNN, KIND_LINEAR
from emblens.probe.knn import knn_probe
from emblens.probe.linear import linear_probe
from emblens.probe.split import stratified_split
from emblens.store.embedding_io import load_embeddings, load_partition
from emblens.synth.SynthConfig import SynthConfig
from emblens.synth.generate import generate_trajectory
from emblens.synth.write import write_trajectory
from emblens.trajectory.report import expand_formats, load_report, write_reports, FORMAT_BOTH
from emblens.util.CliManager import CliManager
from emblens.util.errors import EmblensError, InputError
from emblens.util.format import parse_int_list
from emblens.util.seed import derive_seed, seed_from_env, DEFAULT_SEED


app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Emblens measures embedding quality over training milestones without labels.",
)

PROBE_BOTH = "both"


def fail(e: EmblensError) -> typer.Exit:
    """
    Log an error and turn it into the matching exit status.
    :param e: Error.
    :return: Exit to raise.
    """
    logger.error(f"{e}")
    return typer.Exit(code=e.exit_code)


def settings_overrides(**kwargs: Any) -> Dict[str, Any]:
    return {key: value for key, value in kwargs.items() if value is not None}


@app.command(name="eval")
def eval_run(
        manifest: Path = typer.Argument(..., help="Run manifest (JSON)."),
        out: Optional[Path] = typer.Option(None, "--out", help="Report directory (default: next to the manifest)."),
        jobs: Optional[int] = typer.Option(None, "--jobs", min=1, help="Worker count (default: CPU count)."),
        seed: Optional[int] = typer.Option(None, "--seed", help="Global seed (default: EMBLENS_SEED, else 0)."),
        k1: Optional[int] = typer.Option(None, "--k1", min=1, help="k of the first clustering; k2 = 2·k1."),
        reducer: Optional[str] = typer.Option(None, "--reducer", help="pca | umap-lite"),
        neighbors: Optional[int] = typer.Option(None, "--neighbors", min=2, help="Neighbour count of the reducer."),
        sigma_factor: Optional[float] = typer.Option(None, "--sigma-factor", help="Histogram bin width / σ."),
        pretrained: bool = typer.Option(False, "--pretrained", help="Pretrained encoder: bin width 0.8·σ."),
        reference: Optional[str] = typer.Option(None, "--reference", help="auto | knn | linear | external"),
        late_from_epoch: Optional[int] = typer.Option(
            None, "--late-from-epoch", min=0, help="Also correlate milestones from this epoch on."
        ),
        fmt: str = typer.Option(FORMAT_BOTH, "--format", help="text | csv | both"),
) -> None:
    """
    Evaluate every milestone of a run and correlate the metrics with the reference.
    """
    overrides = settings_overrides(
        seed=seed,
        k1=k1,
        reducer=reducer,
        n_neighbors=neighbors,
        sigma_factor=sigma_factor,
        pretrained=True if pretrained else None,
        reference=reference,
        late_from_epoch=late_from_epoch,
    )

    try:
        expand_formats(fmt)
        context = ContextManager(manifest, overrides=overrides, jobs=jobs)
        result, _paths = context.evaluator.evaluate(context.manifest, out, fmt)
    except EmblensError as e:
        raise fail(e)

    code = EvalManager.exit_code(result)
    if code != 0:
        raise typer.Exit(code=code)


@app.command()
def report(
        report_path: Path = typer.Argument(..., help="Structured report (JSON)."),
        out: Optional[Path] = typer.Option(None, "--out", help="Write re-rendered reports here."),
        fmt: str = typer.Option(FORMAT_BOTH, "--format", help="text | csv | both"),
        rerun: bool = typer.Option(False, "--rerun", help="Re-evaluate the manifest with the embedded settings."),
        jobs: Optional[int] = typer.Option(None, "--jobs", min=1, help="Worker count for --rerun."),
) -> None:
    """
    Show a stored report, re-render it, or re-run it from its embedded settings.
    """
    cli = CliManager()

    try:
        expand_formats(fmt)
        result = load_report(report_path)

        if rerun:
            if result.manifest is None:
                raise InputError(f"Report '{report_path}' holds no manifest path")
            context = ContextManager(Path(result.manifest), result.settings.model_dump(), jobs=jobs, cli=cli)
            result, _paths = context.evaluator.evaluate(context.manifest, out or report_path.parent, fmt)
        else:
            cli.format_settings(result.settings)
            if out is not None:
                write_reports(result, out, fmt)
            cli.format_result(result)
    except EmblensError as e:
        raise fail(e)

    code = EvalManager.exit_code(result)
    if code != 0:
        raise typer.Exit(code=code)


@app.command()
def synth(
        out_dir: Path = typer.Argument(..., help="Output directory."),
        seed: Optional[int] = typer.Option(None, "--seed", help="Seed (default: EMBLENS_SEED, else 0)."),
        run_id: str = typer.Option("synth", "--run-id", help="Run id written to the manifest."),
        n_samples: int = typer.Option(2000, "--samples", help="Samples per milestone."),
        dim: int = typer.Option(32, "--dim", help="Embedding dimensionality."),
        n_classes: int = typer.Option(10, "--classes", help="Class count."),
        n_milestones: int = typer.Option(10, "--milestones", help="Milestone count."),
        epoch_step: int = typer.Option(20, "--epoch-step", help="Epochs between milestones."),
        sigma_start: float = typer.Option(6.0, "--sigma-start", help="Within-class spread at the first milestone."),
        sigma_end: float = typer.Option(0.5, "--sigma-end", help="Within-class spread at the last milestone."),
        between_scale: float = typer.Option(10.0, "--between-scale", help="Radius of the class centers."),
        outlier_milestones: str = typer.Option("", "--outlier-milestones", help="Milestone positions, e.g. 1,3."),
        outlier_rate: float = typer.Option(0.0025, "--outlier-rate", help="Outlier share in those milestones."),
        outlier_radius_factor: float = typer.Option(
            50.0, "--outlier-radius-factor", help="Outlier radius / center radius."
        ),
) -> None:
    """
    Generate a synthetic run (embeddings, labels, manifest) loadable by `eval`.
    """
    try:
        try:
            positions = set(parse_int_list(outlier_milestones))
        except ValueError:
            raise InputError(f"--outlier-milestones expects comma-separated integers, got '{outlier_milestones}'")

        unknown = sorted(p for p in positions if not 0 <= p < n_milestones)
        if unknown:
            raise InputError(f"--outlier-milestones out of range [0, {n_milestones}): {unknown}")

        cfg = SynthConfig(
            n_samples=n_samples,
            dim=dim,
            n_classes=n_classes,
            n_milestones=n_milestones,
            epoch_step=epoch_step,
            within_sigma_start=sigma_start,
            within_sigma_end=sigma_end,
            between_scale=between_scale,
            outlier_rates=tuple(outlier_rate if i in positions else 0.0 for i in range(n_milestones)),
            outlier_radius_factor=outlier_radius_factor,
            seed=seed if seed is not None else seed_from_env(DEFAULT_SEED) or DEFAULT_SEED,
        )
        CliManager().format_config("Synth settings", cfg)

        write_trajectory(generate_trajectory(cfg), out_dir, run_id)
    except EmblensError as e:
        raise fail(e)
    except OSError as e:
        logger.error(f"Failed to write synthetic run: {e}")
        raise typer.Exit(code=1)


@app.command()
def probe(
        embeddings: Path = typer.Argument(..., help="Embeddings file."),
        labels: Path = typer.Argument(..., help="Label file."),
        kind: str = typer.Option(PROBE_BOTH, "--kind", help="knn | linear | both"),
        milestone_id: Optional[str] = typer.Option(None, "--id", help="Milestone id for seeding (default: file stem)."),
        knn_k: int = typer.Option(20, "--knn-k", help="Neighbours of the kNN probe."),
        train_fraction: float = typer.Option(0.5, "--train-fraction", help="Train share per class."),
        epochs: int = typer.Option(200, "--epochs", help="Linear probe epochs."),
        learning_rate: float = typer.Option(0.5, "--learning-rate", help="Linear probe initial rate."),
        l2: float = typer.Option(1e-4, "--l2", help="Linear probe L2 penalty."),
        seed: Optional[int] = typer.Option(None, "--seed", help="Global seed (default: EMBLENS_SEED, else 0)."),
) -> None:
    """
    Run the kNN and/or linear probe on one stored milestone.
    """
    try:
        if kind not in (KIND_KNN, KIND_LINEAR, PROBE_BOTH):
            raise InputError(f"--kind must be knn, linear or both, got '{kind}'")

        identifier = milestone_id if milestone_id is not None else embeddings.stem
        global_seed = seed if seed is not None else seed_from_env(DEFAULT_SEED) or DEFAULT_SEED

        e = load_embeddings(embeddings, milestone_id=identifier)
        gt: Partition = load_partition(labels, n_expected=e.n)

        cfg = ProbeConfig(
            kind=KIND_LINEAR,
            knn_k=knn_k,
            train_fraction=train_fraction,
            epochs=epochs,
            learning_rate=learning_rate,
            l2=l2,
            seed=derive_seed(global_seed, "probe", identifier),
        )
        cli = CliManager()
        cli.format_config("Probe settings", cfg)

        split = stratified_split(gt, cfg.train_fraction, cfg.seed)
        accuracies: Dict[str, float] = {}
        if kind in (KIND_KNN, PROBE_BOTH):
            accuracies[KIND_KNN] = knn_probe(e, gt, cfg.as_kind(KIND_KNN), split)
        if kind in (KIND_LINEAR, PROBE_BOTH):
            accuracies[KIND_LINEAR] = linear_probe(e, gt, cfg, split)

        cli.format_probe(accuracies)
    except EmblensError as e:
        raise fail(e)


@app.command()
def validate(
        manifest: Path = typer.Argument(..., help="Run manifest (JSON)."),
        k1: Optional[int] = typer.Option(None, "--k1", min=1, help="k of the first clustering."),
        distance: Optional[str] = typer.Option(None, "--distance", help="cosine | euclidean"),
        reducer: Optional[str] = typer.Option(None, "--reducer", help="pca | umap-lite"),
        neighbors: Optional[int] = typer.Option(None, "--neighbors", min=2, help="Neighbour count of the reducer."),
) -> None:
    """
    Check a manifest's files, shapes, label ranges and zero-norm rows.
    """
    cli = CliManager()

    validator = ValidateManager(settings_overrides(k1=k1, distance=distance, reducer=reducer, n_neighbors=neighbors))
    diagnostics = validator.validate(manifest)

    if validator.settings is not None:
        cli.format_settings(validator.settings)
    cli.format_diagnostics(diagnostics)

    if not is_valid(diagnostics):
        logger.error(f"Manifest is invalid: {manifest}")
        raise typer.Exit(code=1)

    logger.info(f"Manifest is valid: {manifest}")


if __name__ == "__main__":
    app()
