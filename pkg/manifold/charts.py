"""Coordinate charts sigma(u) with first and second derivatives.

Every chart returns the triple ``(sigma, d_sigma, dd_sigma)`` with shapes
``(N,)``, ``(N, m)`` and ``(N, m, m)``.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from config.errors import ParameterRangeError

TWO_PI = 2.0 * np.pi

ChartTriple = tuple[np.ndarray, np.ndarray, np.ndarray]
EmbedFn = Callable[[np.ndarray], ChartTriple]


@dataclass(frozen=True)
class Chart:
    """
    A box-bounded local parameterization of a manifold patch.

    Periodic axes are wrapped back into ``[lower, upper)`` by ``normalize``;
    charts with a non-trivial identification (the Klein bottle) supply ``fold``.
    """
    chart_id: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    periodic: tuple[bool, ...]
    embed_dim: int
    embed: EmbedFn
    fold: Optional[Callable[[np.ndarray], np.ndarray]] = None

    @property
    def dim(self) -> int:
        return len(self.lower)

    def evaluate(self, u) -> ChartTriple:
        return self.embed(np.asarray(u, dtype=np.float64))

    def sigma(self, u) -> np.ndarray:
        return self.evaluate(u)[0]

    def normalize(self, u) -> np.ndarray:
        u = np.array(u, dtype=np.float64)
        if self.fold is not None:
            return self.fold(u)
        for axis, periodic in enumerate(self.periodic):
            if periodic:
                lo, hi = self.lower[axis], self.upper[axis]
                u[axis] = lo + np.mod(u[axis] - lo, hi - lo)
        return u

    def grid(self, resolution: Sequence[int]) -> np.ndarray:
        """Uniform parameter grid; periodic axes exclude the duplicated endpoint."""
        axes = []
        for lo, hi, periodic, count in zip(self.lower, self.upper, self.periodic, resolution):
            if periodic:
                axes.append(lo + (hi - lo) * np.arange(count) / count)
            else:
                axes.append(np.linspace(lo, hi, count))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)


def circle_product_embedding(n_circles: int, with_axis: bool) -> EmbedFn:
    """(cos u1, sin u1, ..., cos uk, sin uk[, t]) for k unit circles and an optional free axis."""

    def embed(u: np.ndarray) -> ChartTriple:
        m = n_circles + (1 if with_axis else 0)
        n = 2 * n_circles + (1 if with_axis else 0)
        sigma = np.zeros(n)
        d = np.zeros((n, m))
        dd = np.zeros((n, m, m))
        for i in range(n_circles):
            c, s = np.cos(u[i]), np.sin(u[i])
            sigma[2 * i:2 * i + 2] = (c, s)
            d[2 * i, i], d[2 * i + 1, i] = -s, c
            dd[2 * i, i, i], dd[2 * i + 1, i, i] = -c, -s
        if with_axis:
            sigma[-1] = u[-1]
            d[-1, -1] = 1.0
        return sigma, d, dd

    return embed


def torus3d_chart(u1: float, u2: float, R: float, r: float) -> ChartTriple:
    """Torus of revolution in R^3: major radius R about the z-axis, tube radius r."""
    c1, s1 = np.cos(u1), np.sin(u1)
    c2, s2 = np.cos(u2), np.sin(u2)
    ring = R + r * c2
    sigma = np.array([ring * c1, ring * s1, r * s2])
    d = np.array([
        [-ring * s1, -r * s2 * c1],
        [ring * c1, -r * s2 * s1],
        [0.0, r * c2],
    ])
    dd = np.zeros((3, 2, 2))
    dd[:, 0, 0] = (-ring * c1, -ring * s1, 0.0)
    dd[:, 0, 1] = dd[:, 1, 0] = (r * s2 * s1, -r * s2 * c1, 0.0)
    dd[:, 1, 1] = (-r * c2 * c1, -r * c2 * s1, -r * s2)
    return sigma, d, dd


def klein_bottle_chart(u1: float, u2: float, a: float = 2.0, b: float = 1.0) -> ChartTriple:
    """
    Klein bottle embedded in R^4.

        z1 = (a + b cos u2) cos u1      z2 = (a + b cos u2) sin u1
        z3 = b sin u2 cos(u1/2)         z4 = b sin u2 sin(u1/2)

    Args:
        u1, u2: Chart coordinates in [0, 2pi]
        a, b: Radii with a > b > 0

    Returns:
        (sigma, d_sigma, dd_sigma) of shapes (4,), (4, 2), (4, 2, 2)
    """
    if not a > b > 0.0:
        raise ParameterRangeError(f"Klein bottle needs a > b > 0, got a={a}, b={b}")
    c1, s1 = np.cos(u1), np.sin(u1)
    c2, s2 = np.cos(u2), np.sin(u2)
    ch, sh = np.cos(0.5 * u1), np.sin(0.5 * u1)
    ring = a + b * c2

    sigma = np.array([ring * c1, ring * s1, b * s2 * ch, b * s2 * sh])
    d = np.array([
        [-ring * s1, -b * s2 * c1],
        [ring * c1, -b * s2 * s1],
        [-0.5 * b * s2 * sh, b * c2 * ch],
        [0.5 * b * s2 * ch, b * c2 * sh],
    ])
    dd = np.zeros((4, 2, 2))
    dd[:, 0, 0] = (-ring * c1, -ring * s1, -0.25 * b * s2 * ch, -0.25 * b * s2 * sh)
    dd[:, 0, 1] = dd[:, 1, 0] = (b * s2 * s1, -b * s2 * c1, -0.5 * b * c2 * sh, 0.5 * b * c2 * ch)
    dd[:, 1, 1] = (-b * c2 * c1, -b * c2 * s1, -b * s2 * ch, -b * s2 * sh)
    return sigma, d, dd


def klein_fold(u: np.ndarray) -> np.ndarray:
    """Fold (u1, u2) into [0, 2pi)^2 using (u1 + 2pi, u2) ~ (u1, -u2)."""
    u = np.array(u, dtype=np.float64)
    turns = np.floor(u[0] / TWO_PI)
    u[0] = u[0] - TWO_PI * turns
    flip = int(turns) % 2 == 1
    # floor division can round up to exactly 2pi for tiny negative inputs
    if u[0] >= TWO_PI:
        u[0] -= TWO_PI
        flip = not flip
    if flip:
        u[1] = -u[1]
    u[1] = np.mod(u[1], TWO_PI)
    if u[1] >= TWO_PI:
        u[1] = 0.0
    return u
