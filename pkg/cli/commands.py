"""The generate, train, eval and analyze commands.

Every command writes its manifest (status "running") before producing results
and rewrites it with artifact hashes when it finishes.
"""

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from analysis.continuity import continuity_score, family_encoder
from analysis.latent_export import export_latent_codes
from analysis.predictors import ColeHopfPredictor, ModelPredictor, OraclePredictor, ROMPredictor
from analysis.tables import EvalTable, multistep_eval
from analysis.variance import select_informative_dims, variance_stats, write_variance_csv
from baselines.linear_rom import dmd, pod
from cli.manifest import RunManifest, write_manifest
from cli.run_config import BaselineSpec, RunConfig
from cli.seeds import trial_seeds
from config.errors import ConfigError, MissingArtifactError
from config.settings import get_settings
from gdvae.architectures import build_architecture
from gdvae.training import TrainingHistory, train
from pde_data.datasets import (
    BURGERS_IC,
    SnapshotPairSet,
    TrajectorySet,
    arm_points,
    brusselator_test_set,
    burgers_test_set,
    generate_dataset,
    klein_points,
)
from storage.checkpoint_store import CheckpointStore
from storage.csv_store import write_history_csv
from storage.dataset_store import DatasetStore
from storage.rom_store import save_rom

logger = logging.getLogger(__name__)


def _begin(command: str, config: RunConfig, root: Path) -> RunManifest:
    manifest = RunManifest(command=command, config=config.model_dump(mode="json"),
                           trial_seeds=trial_seeds(config.seed, config.trials))
    write_manifest(root, manifest)
    return manifest


def _finish(manifest: RunManifest, root: Path, artifacts: list[Path]) -> None:
    manifest.record(root, artifacts)
    manifest.status = "complete"
    manifest.wall_clock_seconds = time.time() - manifest.started_at
    write_manifest(root, manifest)


def _load_dataset(root: Path) -> SnapshotPairSet:
    store = DatasetStore(root / "data")
    if not store.exists():
        raise MissingArtifactError(f"no dataset under {store.root}; run 'generate' first")
    return store.load()[1]


# generate


def cmd_generate(config: RunConfig, root: Path, threads: int = 1) -> list[Path]:
    """Generate the configured dataset into ``<root>/data``."""
    manifest = _begin("generate", config, root)
    store = DatasetStore(root / "data")
    store.save(config.dataset, generate_dataset(config.dataset, threads))
    artifacts = [store.manifest_path, store.data_path]
    _finish(manifest, root, artifacts)
    print(f"Dataset written to {store.data_path}")
    return artifacts


# train


def _train_trial(config: RunConfig, root: Path, trial: int, seed: int, resume: bool) -> list[Path]:
    resolution = get_settings().point_cloud_resolution
    dataset = _load_dataset(root)
    store = CheckpointStore(root / "checkpoints")
    training = config.training.model_copy(update={"seed": seed})

    if resume and store.exists(trial):
        checkpoint = store.load(trial)
        model, history, start = checkpoint.model, checkpoint.history, checkpoint.next_epoch
        logger.info("Trial %d: resuming at epoch %d", trial, start)
    else:
        model = build_architecture(config.architecture, config.latent_map, config.manifold,
                                   seed=seed, point_cloud_resolution=resolution)
        history, start = TrainingHistory(), 0

    def save(trained, record):
        store.save(trial, trained, training, history, seed, resolution)

    model, history = train(model, dataset, training, start_epoch=start, history=history, on_epoch=save)
    if not store.exists(trial):
        store.save(trial, model, training, history, seed, resolution)
    history_path = write_history_csv(history, store.path(trial).parent / "history.csv")
    return [store.path(trial), history_path]


def cmd_train(config: RunConfig, root: Path, threads: int = 1, resume: bool = True) -> list[Path]:
    """Train every trial; trials run in worker processes when ``threads > 1``."""
    _load_dataset(root)
    manifest = _begin("train", config, root)
    seeds = manifest.trial_seeds
    trials = list(range(config.trials))
    if threads > 1 and len(trials) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_train_trial, [config] * len(trials), [root] * len(trials),
                                    trials, seeds, [resume] * len(trials)))
    else:
        results = [_train_trial(config, root, i, seeds[i], resume) for i in trials]
    artifacts = [path for paths in results for path in paths]
    _finish(manifest, root, artifacts)
    print(f"Trained {len(trials)} trial(s) into {root / 'checkpoints'}")
    return artifacts


# eval


def build_test_set(config: RunConfig, threads: int = 1) -> TrajectorySet:
    """Ground-truth trajectories for the configured family."""
    spec = config.dataset
    if spec.family in BURGERS_IC:
        return burgers_test_set(spec, config.eval.n_alpha, config.eval.steps)
    if spec.family == "brusselator":
        return brusselator_test_set(spec, config.eval.test_alphas, config.eval.steps, threads)
    rng = np.random.default_rng([config.seed, 2])
    params = rng.uniform(0.0, 2.0 * np.pi, (config.eval.n_alpha, 2))
    if spec.family == "arm":
        X0 = arm_points(params[:, 0], params[:, 1], spec.l1, spec.l2)
    else:
        X0 = klein_points(params, spec.a, spec.b)
    return TrajectorySet(X0, X0[None].copy(), 0.0, [tuple(p) for p in params])


def _baseline_predictor(baseline: BaselineSpec, config: RunConfig, root: Path, dataset: SnapshotPairSet,
                        test_set: TrajectorySet, artifacts: list[Path]):
    if baseline.kind == "oracle":
        return OraclePredictor(test_set.truth)
    if baseline.kind == "cole-hopf":
        if config.dataset.family not in BURGERS_IC:
            raise ConfigError("Cole-Hopf baselines apply to Burgers datasets only", "baselines")
        return ColeHopfPredictor(baseline.dim, config.dataset.nu, config.dataset.tau)
    X = dataset.X.reshape(len(dataset), -1)
    x = dataset.x.reshape(len(dataset), -1)
    rom = dmd(X, x, baseline.dim, baseline.center) if baseline.kind == "dmd" else pod(X, baseline.dim, x, baseline.center)
    path = save_rom(root / "roms" / f"{baseline.label}.gdrom", rom)
    artifacts.append(path)
    return ROMPredictor(rom)


def cmd_eval(config: RunConfig, root: Path, threads: int = 1) -> Path:
    """
    Multi-step error table for the trained trials and the configured baselines.

    Raises:
        MissingTrialError: A trial has no checkpoint
    """
    manifest = _begin("eval", config, root)
    test_set = build_test_set(config, threads)
    steps = test_set.truth.shape[0] - 1
    table = EvalTable(list(test_set.horizons), info={"test_items": int(test_set.X0.shape[0])})
    artifacts: list[Path] = []

    store = CheckpointStore(root / "checkpoints")
    predictors = [ModelPredictor(store.load(i).model, config.eval.re_encode) if store.exists(i) else None
                  for i in range(config.trials)]
    table.rows.append(multistep_eval(predictors, test_set, config.eval.method, config.architecture.latent_dim, steps))

    if config.baselines:
        dataset = _load_dataset(root) if any(b.kind in ("dmd", "pod") for b in config.baselines) else None
        for baseline in config.baselines:
            predictor = _baseline_predictor(baseline, config, root, dataset, test_set, artifacts)
            table.rows.append(multistep_eval([predictor], test_set, baseline.label, baseline.dim, steps))

    path = table.write_csv(root / "eval" / "table.csv")
    artifacts += [path, path.with_suffix(".json")]
    _finish(manifest, root, artifacts)
    print(f"Evaluation table written to {path}")
    return path


# analyze


def cmd_analyze(config: RunConfig, root: Path) -> list[Path]:
    """
    Variance statistics, informative dimensions, continuity scores and latent codes per trial.

    Raises:
        MissingTrialError: A trial has no checkpoint
    """
    manifest = _begin("analyze", config, root)
    dataset = _load_dataset(root)
    store = CheckpointStore(root / "checkpoints")
    spec = config.analysis
    out = root / "analysis"
    out.mkdir(parents=True, exist_ok=True)
    artifacts: list[Path] = []
    summary: dict[str, dict] = {}
    continuity_rows = []

    for trial in range(config.trials):
        model = store.load(trial).model
        entry: dict = {}
        if model.encoder.deterministic:
            logger.warning("Trial %d: deterministic encoder, skipping variance statistics", trial)
        else:
            stats = variance_stats(model, dataset.X[:spec.batch])
            selected = select_informative_dims(stats, spec.threshold)
            artifacts.append(write_variance_csv(stats, out / f"variance_trial_{trial}.csv", selected))
            entry["selected_dims"] = selected
        if spec.continuity_family and not config.architecture.is_conv:
            alphas = np.arange(spec.continuity_grid) / spec.continuity_grid
            score = continuity_score(family_encoder(model, spec.continuity_family, config.architecture.input_dim), alphas)
            continuity_rows.append([trial, f"{score:.9e}"])
            entry["continuity_score"] = score
        if spec.export_codes:
            artifacts.append(export_latent_codes(model, dataset, out / f"latent_trial_{trial}.csv"))
        summary[str(trial)] = entry

    if continuity_rows:
        path = out / "continuity.csv"
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["trial", "continuity_score_max_over_median_gap"])
            writer.writerows(continuity_rows)
        artifacts.append(path)
    summary_path = out / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True))
    artifacts.append(summary_path)
    _finish(manifest, root, artifacts)
    print(f"Analysis written to {out}")
    return artifacts
