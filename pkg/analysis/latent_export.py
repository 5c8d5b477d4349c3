"""Latent-code export for plotting."""

import csv
from pathlib import Path
from typing import Union

import numpy as np

from gdvae.model import GDVAEModel
from gdvae.prediction import latent_codes
from pde_data.datasets import SnapshotPairSet


def export_latent_codes(model: GDVAEModel, dataset: SnapshotPairSet, path: Union[str, Path],
                        batch_size: int = 500) -> Path:
    """
    Write the mean-path codes of every input snapshot.

    Rows are ``alpha[,alpha2],t,z1..zN`` in dataset order.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    codes = np.concatenate([latent_codes(model, dataset.X[i:i + batch_size])
                            for i in range(0, len(dataset), batch_size)]) if len(dataset) else np.zeros((0, model.embed_dim))
    n_params = len(dataset.metadata[0]["params"]) if dataset.metadata else 1
    header = ["alpha"] + [f"alpha{i + 1}" for i in range(1, n_params)]
    header += ["t"] + [f"z{i + 1}" for i in range(codes.shape[1])]
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for i, z in enumerate(codes):
            meta = dataset.metadata[i] if dataset.metadata else {"params": [np.nan], "t": np.nan}
            writer.writerow([repr(float(p)) for p in meta["params"]] + [repr(float(meta["t"]))]
                            + [repr(float(v)) for v in z])
    return path


def read_latent_codes(path: Union[str, Path]) -> tuple[list[str], np.ndarray]:
    with Path(path).open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = [[float(c) for c in row] for row in reader]
    return header, np.array(rows).reshape(len(rows), len(header))
