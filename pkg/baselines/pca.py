"""PCA embedding of snapshot trajectories."""

from dataclasses import dataclass

import numpy as np

from config.errors import ParameterRangeError


@dataclass
class PCAEmbedding:
    coords: np.ndarray
    components: np.ndarray
    mean: np.ndarray
    singular_values: np.ndarray

    @property
    def variance_captured(self) -> float:
        """sum_{i<=d} s_i^2 / sum s_i^2"""
        total = float(np.sum(self.singular_values ** 2))
        d = self.components.shape[0]
        return float(np.sum(self.singular_values[:d] ** 2)) / total if total > 0 else 0.0


def pca_embed(snapshots: np.ndarray, d: int = 3) -> PCAEmbedding:
    """Mean-centered coordinates on the top-d right singular vectors of the snapshot rows."""
    data = np.asarray(snapshots, dtype=np.float64)
    data = data.reshape(data.shape[0], -1)
    if d < 1 or data.shape[0] < d:
        raise ParameterRangeError(f"PCA to {d} dims needs at least {d} snapshots, got {data.shape[0]}")
    mean = data.mean(axis=0)
    _, s, Vt = np.linalg.svd(data - mean, full_matrices=False)
    components = Vt[:d]
    if components.shape[0] < d:
        components = np.vstack([components, np.zeros((d - components.shape[0], data.shape[1]))])
    return PCAEmbedding((data - mean) @ components.T, components, mean, s)


def loop_gap_ratio(coords: np.ndarray) -> float:
    """Largest cyclic gap between consecutive points over the loop diameter."""
    coords = np.asarray(coords, dtype=np.float64)
    gaps = np.linalg.norm(np.roll(coords, -1, axis=0) - coords, axis=1)
    diameter = float(np.max(np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=-1)))
    return float(gaps.max()) / diameter if diameter > 0 else np.inf
