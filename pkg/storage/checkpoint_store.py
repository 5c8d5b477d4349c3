"""Model checkpoints: weights, Adam state, epoch counter and loss history."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from config.errors import MissingTrialError, ShapeError
from gdvae.architectures import build_architecture
from gdvae.config import ArchitectureSpec, LatentMapSpec, TrainingConfig
from gdvae.model import GDVAEModel
from gdvae.training import EpochRecord, TrainingHistory
from manifold.descriptor import AtlasDescriptor
from storage.container import CHECKPOINT_MAGIC, read_container, write_container

logger = logging.getLogger(__name__)


@dataclass
class Checkpoint:
    """A restored model with everything needed to resume training."""
    model: GDVAEModel
    config: TrainingConfig
    history: TrainingHistory
    epoch: int
    seed: int

    @property
    def next_epoch(self) -> int:
        return self.epoch + 1


def save_checkpoint(
    path: Union[str, Path],
    model: GDVAEModel,
    config: TrainingConfig,
    history: TrainingHistory,
    seed: int,
    point_cloud_resolution: int = 64,
) -> Path:
    """Write a checkpoint after the last epoch in ``history``."""
    params = model.parameters()
    arrays = {}
    for i, p in enumerate(params):
        arrays[f"p{i}.value"] = p.value
        arrays[f"p{i}.m"] = p.m
        arrays[f"p{i}.v"] = p.v
    header = {
        "architecture": model.architecture.model_dump(mode="json"),
        "latent_map": model.map_spec.model_dump(mode="json"),
        "manifold": model.manifold.model_dump(mode="json") if model.manifold is not None else None,
        "point_cloud_resolution": point_cloud_resolution,
        "training": config.model_dump(mode="json"),
        "seed": seed,
        "epoch": history.last_epoch,
        "history": [[r.epoch, r.L_RE, r.L_KL, r.L_RR, r.total, r.mse] for r in history.records],
        "parameters": [{"name": p.name, "step": p.step} for p in params],
        "decoder_log_var": model.decoder.log_var,
    }
    return write_container(path, CHECKPOINT_MAGIC, header, arrays)


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """
    Rebuild the model from its stored specs and restore weights and optimizer moments.

    Raises:
        MissingArtifactError: No file at ``path``
        ShapeError: Stored parameters do not fit the rebuilt architecture
    """
    header, arrays = read_container(path, CHECKPOINT_MAGIC)
    manifold = AtlasDescriptor(**header["manifold"]) if header["manifold"] else None
    model = build_architecture(
        ArchitectureSpec(**header["architecture"]),
        LatentMapSpec(**header["latent_map"]),
        manifold,
        seed=header["seed"],
        point_cloud_resolution=header["point_cloud_resolution"],
    )
    params = model.parameters()
    stored = header["parameters"]
    if len(stored) != len(params):
        raise ShapeError(f"checkpoint holds {len(stored)} parameters, architecture has {len(params)}")
    for i, (param, meta) in enumerate(zip(params, stored)):
        param.assign(arrays[f"p{i}.value"])
        param.m = arrays[f"p{i}.m"].reshape(param.shape)
        param.v = arrays[f"p{i}.v"].reshape(param.shape)
        param.step = int(meta["step"])
    if header["decoder_log_var"] is not None:
        model.decoder.log_var = float(header["decoder_log_var"])
    history = TrainingHistory([EpochRecord(int(row[0]), *row[1:5], mse=row[5]) for row in header["history"]])
    return Checkpoint(model, TrainingConfig(**header["training"]), history, int(header["epoch"]), int(header["seed"]))


class CheckpointStore:
    """Per-trial checkpoints under one run directory."""

    def __init__(self, root: Union[str, Path], name: str = "model"):
        self.root = Path(root)
        self.name = name

    def path(self, trial: int) -> Path:
        return self.root / f"trial_{trial}" / f"{self.name}.gdvae"

    def exists(self, trial: int) -> bool:
        return self.path(trial).exists()

    def save(self, trial: int, model: GDVAEModel, config: TrainingConfig, history: TrainingHistory,
             seed: int, point_cloud_resolution: int = 64) -> Path:
        path = save_checkpoint(self.path(trial), model, config, history, seed, point_cloud_resolution)
        logger.debug("Saved checkpoint %s (epoch %d)", path, history.last_epoch)
        return path

    def load(self, trial: int) -> Checkpoint:
        if not self.exists(trial):
            raise MissingTrialError(f"no checkpoint for trial {trial} at {self.path(trial)}", trials=[trial])
        return load_checkpoint(self.path(trial))

    def load_optional(self, trial: int) -> Optional[Checkpoint]:
        return self.load(trial) if self.exists(trial) else None

    def trials(self) -> list[int]:
        found = []
        for directory in sorted(self.root.glob("trial_*")):
            if (directory / f"{self.name}.gdvae").exists():
                found.append(int(directory.name.split("_", 1)[1]))
        return sorted(found)
