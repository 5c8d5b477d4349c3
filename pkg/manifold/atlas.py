"""Manifold atlases, point-cloud seeds and the library of latent manifolds."""

import csv
import dataclasses
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from config.errors import ConfigError, ParameterRangeError
from manifold.charts import (
    TWO_PI,
    Chart,
    circle_product_embedding,
    klein_bottle_chart,
    klein_fold,
    torus3d_chart,
)

logger = logging.getLogger(__name__)

ANALYTIC_TAGS = ("circle", "product-of-circles", "cylinder-axis", "torus3d")
TAGS = ANALYTIC_TAGS + ("klein4d",)


@dataclass(frozen=True, eq=False)
class PointCloudSeed:
    """Sample points z_j on the manifold with their chart coordinates (k_j, u_j)."""
    points: np.ndarray  # (P, N)
    chart_ids: np.ndarray  # (P,)
    coords: np.ndarray  # (P, m)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.points)

    def nearest(self, w: np.ndarray, k: int = 8) -> np.ndarray:
        """
        Indices of the ``k`` nearest seeds ordered by (distance, index).

        Exact distance ties resolve to the lower index.
        """
        k = min(k, len(self))
        _, idx = self.tree.query(w, k=k)
        idx = np.atleast_1d(idx)
        dist = np.linalg.norm(self.points[idx] - w, axis=1)
        order = np.lexsort((idx, dist))
        return idx[order]

    def mesh_distance(self, w: np.ndarray) -> float:
        """Distance from w to its nearest seed."""
        dist, _ = self.tree.query(w, k=1)
        return float(dist)

    def write_csv(self, path: Union[str, Path]) -> None:
        """Write rows ``k,u1..um,z1..zN``."""
        m, n = self.coords.shape[1], self.points.shape[1]
        header = ["k"] + [f"u{i + 1}" for i in range(m)] + [f"z{i + 1}" for i in range(n)]
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for k, u, z in zip(self.chart_ids, self.coords, self.points):
                writer.writerow([int(k)] + [repr(float(x)) for x in u] + [repr(float(x)) for x in z])

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> "PointCloudSeed":
        with open(path, newline="") as f:
            reader = csv.reader(f)
            header = next(reader)
            rows = [[float(x) for x in row] for row in reader]
        m = sum(1 for name in header if name.startswith("u"))
        data = np.array(rows, dtype=np.float64).reshape(-1, len(header))
        return cls(points=data[:, 1 + m:], chart_ids=data[:, 0].astype(np.int64), coords=data[:, 1:1 + m])


@dataclass(frozen=True, eq=False)
class ManifoldAtlas:
    """
    A latent manifold M in R^N: its charts, optional analytic projector tag
    and optional point-cloud seed for chart-based projection.

    ``free_axes`` lists embedding coordinates left unconstrained (the cylinder axis).
    """
    tag: Optional[str]
    charts: tuple[Chart, ...]
    dim: int
    embed_dim: int
    params: dict = field(default_factory=dict)
    free_axes: tuple[int, ...] = ()
    point_cloud: Optional[PointCloudSeed] = None

    def __post_init__(self):
        if self.embed_dim < self.dim:
            raise ConfigError(f"embedding dim {self.embed_dim} below intrinsic dim {self.dim}", "manifold")
        if self.tag is not None and self.tag not in TAGS:
            raise ConfigError(f"unknown manifold tag '{self.tag}'", "manifold.tag")

    @property
    def analytic(self) -> bool:
        return self.tag in ANALYTIC_TAGS

    def chart(self, chart_id: int) -> Chart:
        for chart in self.charts:
            if chart.chart_id == chart_id:
                return chart
        raise ConfigError(f"no chart with id {chart_id}", "manifold.charts")

    def with_point_cloud(self, resolution: Union[int, Sequence[int]]) -> "ManifoldAtlas":
        return dataclasses.replace(self, point_cloud=build_point_cloud(self, resolution))


def build_point_cloud(atlas: ManifoldAtlas, resolution: Union[int, Sequence[int]]) -> PointCloudSeed:
    """
    Sample every chart on a uniform parameter grid.

    Args:
        atlas: Atlas whose charts are sampled
        resolution: Points per chart axis (one value for all axes, or one per axis)

    Returns:
        PointCloudSeed holding (z, k, u) for every grid point

    Raises:
        ParameterRangeError: If any axis gets fewer than 2 points
    """
    if isinstance(resolution, (int, np.integer)):
        resolution = (int(resolution),) * atlas.dim
    resolution = tuple(int(r) for r in resolution)
    if len(resolution) != atlas.dim or min(resolution) < 2:
        raise ParameterRangeError(f"point-cloud resolution must be >= 2 on each of {atlas.dim} axes, got {resolution}")

    points, chart_ids, coords = [], [], []
    for chart in atlas.charts:
        grid = chart.grid(resolution)
        points.append(np.stack([chart.sigma(u) for u in grid]))
        chart_ids.append(np.full(len(grid), chart.chart_id, dtype=np.int64))
        coords.append(grid)

    seed = PointCloudSeed(
        points=np.concatenate(points),
        chart_ids=np.concatenate(chart_ids),
        coords=np.concatenate(coords),
    )
    logger.debug("Built %d-point cloud for %s", len(seed), atlas.tag)
    return seed


# Library


def circle() -> ManifoldAtlas:
    """Unit circle S^1 in R^2."""
    chart = Chart(0, (0.0,), (TWO_PI,), (True,), 2, circle_product_embedding(1, False))
    return ManifoldAtlas("circle", (chart,), dim=1, embed_dim=2)


def clifford_torus(n_circles: int = 2) -> ManifoldAtlas:
    """Product of unit circles (S^1)^k in R^2k; k=2 is the Clifford torus."""
    if n_circles < 1:
        raise ParameterRangeError(f"need at least one circle, got {n_circles}")
    chart = Chart(
        0, (0.0,) * n_circles, (TWO_PI,) * n_circles, (True,) * n_circles,
        2 * n_circles, circle_product_embedding(n_circles, False),
    )
    return ManifoldAtlas("product-of-circles", (chart,), dim=n_circles, embed_dim=2 * n_circles,
                         params={"n_circles": n_circles})


def cylinder(axis_range: tuple[float, float] = (-1.0, 1.0), n_circles: int = 1) -> ManifoldAtlas:
    """S^1 x R in R^3 (more circles allowed); the last coordinate is the free axis."""
    lo, hi = axis_range
    if not hi > lo:
        raise ParameterRangeError(f"cylinder axis range must be increasing, got {axis_range}")
    chart = Chart(
        0, (0.0,) * n_circles + (lo,), (TWO_PI,) * n_circles + (hi,), (True,) * n_circles + (False,),
        2 * n_circles + 1, circle_product_embedding(n_circles, True),
    )
    n = 2 * n_circles + 1
    return ManifoldAtlas("cylinder-axis", (chart,), dim=n_circles + 1, embed_dim=n,
                         params={"n_circles": n_circles, "axis_range": [lo, hi]}, free_axes=(n - 1,))


def torus3d(R: float = 2.0, r: float = 1.0) -> ManifoldAtlas:
    """Torus of revolution in R^3 with major radius R and tube radius r."""
    if not R > r > 0.0:
        raise ParameterRangeError(f"torus needs R > r > 0, got R={R}, r={r}")
    chart = Chart(0, (0.0, 0.0), (TWO_PI, TWO_PI), (True, True), 3,
                  lambda u: torus3d_chart(u[0], u[1], R, r))
    return ManifoldAtlas("torus3d", (chart,), dim=2, embed_dim=3, params={"R": R, "r": r})


def klein_bottle(a: float = 2.0, b: float = 1.0, resolution: Optional[int] = 64) -> ManifoldAtlas:
    """Klein bottle in R^4; projected through its chart, seeded from a point cloud."""
    if not a > b > 0.0:
        raise ParameterRangeError(f"Klein bottle needs a > b > 0, got a={a}, b={b}")
    chart = Chart(0, (0.0, 0.0), (TWO_PI, TWO_PI), (True, True), 4,
                  lambda u: klein_bottle_chart(u[0], u[1], a, b), fold=klein_fold)
    atlas = ManifoldAtlas("klein4d", (chart,), dim=2, embed_dim=4, params={"a": a, "b": b})
    return atlas.with_point_cloud(resolution) if resolution else atlas
