"""Datasets on disk: a JSON manifest next to a binary snapshot file."""

import csv
import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from pde_data.datasets import DatasetSpec, SnapshotPairSet
from storage.container import DATASET_MAGIC, file_sha256, read_container, write_container

logger = logging.getLogger(__name__)


class DatasetStore:
    """``<root>/<name>.json`` (manifest) and ``<root>/<name>.gddat`` (snapshots in sample order)."""

    def __init__(self, root: Union[str, Path], name: str = "dataset"):
        self.root = Path(root)
        self.name = name

    @property
    def manifest_path(self) -> Path:
        return self.root / f"{self.name}.json"

    @property
    def data_path(self) -> Path:
        return self.root / f"{self.name}.gddat"

    def exists(self) -> bool:
        return self.manifest_path.exists() and self.data_path.exists()

    def save(self, spec: DatasetSpec, dataset: SnapshotPairSet) -> Path:
        header = {"spec": spec.model_dump(mode="json"), "info": dataset.info, "metadata": dataset.metadata}
        write_container(self.data_path, DATASET_MAGIC, header, {"X": dataset.X, "x": dataset.x})
        manifest = {
            "spec": spec.model_dump(mode="json"),
            "info": dataset.info,
            "pairs": len(dataset),
            "sample_shape": list(dataset.sample_shape),
            "data_file": self.data_path.name,
            "sha256": file_sha256(self.data_path),
        }
        self.manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
        logger.info("Wrote %d pairs to %s", len(dataset), self.data_path)
        return self.manifest_path

    def load(self) -> tuple[DatasetSpec, SnapshotPairSet]:
        """
        Raises:
            MissingArtifactError: Manifest or snapshot file absent
        """
        header, arrays = read_container(self.data_path, DATASET_MAGIC)
        return DatasetSpec(**header["spec"]), SnapshotPairSet(arrays["X"], arrays["x"], header["metadata"], header["info"])

    def export_csv(self, directory: Union[str, Path]) -> list[Path]:
        """One CSV per pair: columns ``index,X,x`` over the flattened sample."""
        _, dataset = self.load()
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        paths = []
        for i in range(len(dataset)):
            path = directory / f"pair_{i:06d}.csv"
            with path.open("w", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(["index", "X", "x"])
                for k, (a, b) in enumerate(zip(np.ravel(dataset.X[i]), np.ravel(dataset.x[i]))):
                    writer.writerow([k, repr(float(a)), repr(float(b))])
            paths.append(path)
        return paths
