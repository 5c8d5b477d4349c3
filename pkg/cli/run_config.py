"""Run configuration: one JSON document per experiment."""

import json
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from config.errors import ConfigError
from gdvae.config import ArchitectureSpec, LatentMapSpec, TrainingConfig
from manifold.descriptor import AtlasDescriptor
from pde_data.datasets import DatasetSpec

MAX_SEED = 2 ** 64 - 1


class BaselineSpec(BaseModel):
    """A comparison row: linear ROM, truncated Cole-Hopf model or the ground-truth oracle."""

    kind: Literal["dmd", "pod", "cole-hopf", "oracle"]
    dim: int = Field(default=3, ge=1)
    center: bool = True

    @property
    def label(self) -> str:
        if self.kind == "oracle":
            return "Oracle"
        name = {"dmd": "DMD", "pod": "POD", "cole-hopf": "Cole-Hopf"}[self.kind]
        return f"{name}-{self.dim}D"


class EvalSpec(BaseModel):
    method: str = "GD-VAE"
    steps: int = Field(default=4, ge=0)
    n_alpha: int = Field(default=100, ge=1)
    test_alphas: list[float] = Field(default_factory=lambda: [0.1, 0.3, 0.5, 0.7, 0.9])
    re_encode: bool = False


class AnalysisSpec(BaseModel):
    batch: int = Field(default=1000, ge=2)
    threshold: float = Field(default=10.0, gt=0)
    continuity_family: Optional[Literal["periodic"]] = "periodic"
    continuity_grid: int = Field(default=100, ge=3)
    export_codes: bool = True


class RunConfig(BaseModel):
    """Everything one experiment needs; ``seed`` is mandatory."""

    name: str
    seed: int = Field(ge=0, le=MAX_SEED)
    trials: int = Field(default=1, ge=1)
    output_dir: Optional[str] = None
    dataset: DatasetSpec = Field(default_factory=DatasetSpec)
    architecture: ArchitectureSpec = Field(default_factory=ArchitectureSpec)
    latent_map: LatentMapSpec = Field(default_factory=LatentMapSpec)
    manifold: Optional[AtlasDescriptor] = None
    training: TrainingConfig = Field(default_factory=TrainingConfig)
    baselines: list[BaselineSpec] = Field(default_factory=list)
    eval: EvalSpec = Field(default_factory=EvalSpec)
    analysis: AnalysisSpec = Field(default_factory=AnalysisSpec)


def _field_path(error: dict) -> str:
    return ".".join(str(part) for part in error.get("loc", ()))


def parse_run_config(document: dict) -> RunConfig:
    """
    Raises:
        ConfigError: Validation failed; the message and ``field_path`` name the first bad field
    """
    try:
        return RunConfig.model_validate(document)
    except ValidationError as exc:
        first = exc.errors()[0]
        path = _field_path(first)
        raise ConfigError(first["msg"], path) from exc


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Read and validate a run configuration file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}", "--config")
    try:
        document = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}", "--config") from exc
    return parse_run_config(document)
