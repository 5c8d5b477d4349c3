"""Run manifests: resolved config, artifact hashes, version, timing, trial seeds."""

import json
import logging
import time
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, Field

from config.errors import MissingArtifactError
from storage.container import file_sha256

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.1.0"


class RunManifest(BaseModel):
    command: str
    config: dict
    tool_version: str = TOOL_VERSION
    started_at: float = Field(default_factory=time.time)
    wall_clock_seconds: Optional[float] = None
    status: str = "running"
    trial_seeds: list[int] = Field(default_factory=list)
    artifacts: dict[str, str] = Field(default_factory=dict)

    def record(self, root: Path, paths: list[Path]) -> None:
        """Hash artifacts; keys are paths relative to the run directory."""
        for path in paths:
            self.artifacts[Path(path).relative_to(root).as_posix()] = file_sha256(path)


def manifest_path(root: Union[str, Path], command: str) -> Path:
    return Path(root) / f"manifest_{command}.json"


def write_manifest(root: Union[str, Path], manifest: RunManifest) -> Path:
    path = manifest_path(root, manifest.command)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest.model_dump(mode="json"), indent=2, sort_keys=True))
    return path


def read_manifest(path: Union[str, Path]) -> RunManifest:
    path = Path(path)
    if not path.exists():
        raise MissingArtifactError(f"missing manifest: {path}")
    return RunManifest.model_validate_json(path.read_text())


def verify_manifest(path: Union[str, Path]) -> list[str]:
    """
    Re-hash every artifact the manifest lists.

    Returns:
        Relative paths whose hash no longer matches (empty when all verify)

    Raises:
        MissingArtifactError: The manifest or a listed artifact is absent
    """
    path = Path(path)
    manifest = read_manifest(path)
    mismatched = []
    for relative, digest in sorted(manifest.artifacts.items()):
        artifact = path.parent / relative
        if not artifact.exists():
            raise MissingArtifactError(f"artifact listed in {path.name} is missing: {relative}")
        if file_sha256(artifact) != digest:
            mismatched.append(relative)
    if mismatched:
        logger.warning("%d artifact(s) in %s fail verification", len(mismatched), path.name)
    return mismatched
