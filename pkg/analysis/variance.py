"""Per-dimension encoder statistics used to find the informative latent dimensions.

For encoder means mu_i and variances sigma_i^2 over a batch of N_b inputs:

    q_mov = mean over the batch of sigma_i^2
    q_vom = mean over the batch of mu_i^2 - (mean over the batch of mu_i)^2

Dimensions the decoder relies on have a large q_vom and a small q_mov.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from config.errors import ConfigError, ParameterRangeError
from gdvae.model import GDVAEModel, encode


@dataclass
class VarianceStats:
    q_mov: np.ndarray
    q_vom: np.ndarray
    n_batch: int

    @property
    def ratio(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(self.q_mov > 0, self.q_vom / np.where(self.q_mov > 0, self.q_mov, 1.0), np.inf)
        return np.where((self.q_mov == 0) & (self.q_vom == 0), 0.0, ratio)


def variance_stats_from_outputs(mu: np.ndarray, var: np.ndarray) -> VarianceStats:
    mu = np.asarray(mu, dtype=np.float64)
    var = np.asarray(var, dtype=np.float64)
    if mu.shape != var.shape or mu.ndim != 2:
        raise ParameterRangeError(f"need matching (N_b, d) means and variances, got {mu.shape} and {var.shape}")
    if mu.shape[0] < 2:
        raise ParameterRangeError(f"variance statistics need a batch of at least 2, got {mu.shape[0]}")
    q_vom = np.maximum(np.mean(mu ** 2, axis=0) - np.mean(mu, axis=0) ** 2, 0.0)
    return VarianceStats(np.mean(var, axis=0), q_vom, int(mu.shape[0]))


def variance_stats(model: GDVAEModel, X: np.ndarray) -> VarianceStats:
    """Statistics of the encoder's pre-projection mean and variance over the batch X."""
    encoded = encode(model, X)
    if encoded.log_var is None:
        raise ConfigError("variance statistics need an encoder with sigma_e > 0", "architecture.sigma_e")
    return variance_stats_from_outputs(encoded.w.value, encoded.variance)


def select_informative_dims(stats: VarianceStats, threshold: float = 10.0) -> list[int]:
    """
    Dimensions whose q_vom / q_mov exceeds ``threshold`` times the median ratio,
    ranked by ratio (largest first). Identical dimensions select nothing.
    """
    ratio = stats.ratio
    median = float(np.median(ratio))
    if not np.isfinite(median):
        return [int(i) for i in np.argsort(-ratio, kind="stable") if np.isinf(ratio[i])]
    chosen = [int(i) for i in np.argsort(-ratio, kind="stable") if ratio[i] > threshold * median]
    return chosen


def write_variance_csv(stats: VarianceStats, path: Union[str, Path], selected: Optional[list[int]] = None) -> Path:
    """One row per dimension: ``dim,q_mov,q_vom,ratio,selected``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    selected = set(selected or [])
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["dim", "q_mov", "q_vom", "ratio", "selected"])
        for i, (mov, vom, ratio) in enumerate(zip(stats.q_mov, stats.q_vom, stats.ratio)):
            writer.writerow([i, f"{mov:.9e}", f"{vom:.9e}", f"{ratio:.9e}", int(i in selected)])
    return path
