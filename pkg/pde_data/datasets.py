"""Training pairs and test trajectories for every experiment family."""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from config.errors import ParameterRangeError
from pde_data.brusselator import BrusselatorParams, brusselator_solve
from pde_data.burgers import burgers_solve_spectral
from pde_data.initial_conditions import IC_RANGES, TWO_PI, brusselator_ic, sample_ic, sample_ic_params

logger = logging.getLogger(__name__)

DatasetFamily = Literal[
    "burgers-u1",
    "burgers-periodic",
    "burgers-doubly-periodic",
    "brusselator",
    "arm",
    "klein",
]

BURGERS_IC = {
    "burgers-u1": "u1",
    "burgers-periodic": "periodic",
    "burgers-doubly-periodic": "doubly_periodic",
}


class DatasetSpec(BaseModel):
    """Everything needed to regenerate a dataset bit-for-bit."""

    family: DatasetFamily = "burgers-u1"
    m: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0)
    noise: float = Field(default=0.0, ge=0)
    noise_targets: bool = True

    # Burgers
    n: int = Field(default=100, ge=4)
    nu: float = Field(default=0.02, gt=0)
    tau: float = Field(default=0.25, ge=0)
    t_range: tuple[float, float] = (0.0, 1.0)
    alpha: Optional[list[float]] = None

    # Brusselator
    grid: int = Field(default=64, ge=4)
    trajectories: int = Field(default=10, ge=1)
    alphas: Optional[list[float]] = None
    t_discard: float = Field(default=15.0, ge=0)
    pair_stride: float = Field(default=2.0, gt=0)
    pairs_per_trajectory: int = Field(default=10, ge=1)
    integrator: Literal["explicit-euler", "semi-implicit", "rk4"] = "explicit-euler"
    dt: float = Field(default=1e-3, gt=0)

    # Mechanisms
    l1: float = Field(default=1.0, gt=0)
    l2: float = Field(default=0.5, gt=0)
    a: float = Field(default=2.0, gt=0)
    b: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _check(self) -> "DatasetSpec":
        lo, hi = self.t_range
        if not 0.0 <= lo <= hi:
            raise ValueError(f"t_range must satisfy 0 <= start <= end, got {self.t_range}")
        if self.alpha is not None and self.family in BURGERS_IC:
            ranges = IC_RANGES[BURGERS_IC[self.family]]
            if len(self.alpha) != len(ranges):
                raise ValueError(f"{self.family} takes {len(ranges)} IC parameter(s), got {len(self.alpha)}")
            for value, (low, high) in zip(self.alpha, ranges):
                if not low <= value <= high:
                    raise ValueError(f"IC parameter {value} outside [{low}, {high:.6g}]")
        if self.alphas is not None and any(not 0.0 <= a <= 1.0 for a in self.alphas):
            raise ValueError("Brusselator alphas must lie in [0, 1]")
        if self.family == "klein" and not self.a > self.b:
            raise ValueError(f"Klein bottle needs a > b, got a={self.a}, b={self.b}")
        return self


@dataclass
class SnapshotPairSet:
    """
    Pairs (X[i], x[i]) with x[i] one time step after X[i].

    ``metadata`` holds one dict per pair (IC parameters, sample time, tau, noise seed);
    ``info`` holds dataset-wide settings.
    """
    X: np.ndarray
    x: np.ndarray
    metadata: list[dict] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.X.shape != self.x.shape:
            raise ParameterRangeError(f"inputs {self.X.shape} and targets {self.x.shape} differ in shape")
        if self.metadata and len(self.metadata) != len(self.X):
            raise ParameterRangeError(f"{len(self.metadata)} metadata rows for {len(self.X)} pairs")

    def __len__(self) -> int:
        return len(self.X)

    @property
    def sample_shape(self) -> tuple[int, ...]:
        return tuple(self.X.shape[1:])

    def subset(self, index) -> "SnapshotPairSet":
        index = np.asarray(index)
        return SnapshotPairSet(self.X[index], self.x[index],
                               [self.metadata[i] for i in index] if self.metadata else [], dict(self.info))


@dataclass
class TrajectorySet:
    """
    Ground truth for multi-step evaluation.

    ``truth[k]`` is the state k steps after ``X0``; ``truth[0]`` equals ``X0``.
    """
    X0: np.ndarray
    truth: np.ndarray
    step: float
    params: list = field(default_factory=list)

    @property
    def horizons(self) -> np.ndarray:
        return self.step * np.arange(self.truth.shape[0])


def _noise_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 63 - 1))


def make_burgers_dataset(spec: DatasetSpec) -> SnapshotPairSet:
    """
    m pairs (u(t_i) + noise, u(t_i + tau) + noise) with IC parameters and t_i uniform.

    A fixed ``spec.alpha`` pins every pair to that IC; ``noise_targets=False``
    leaves the targets clean.
    """
    family = BURGERS_IC.get(spec.family)
    if family is None:
        raise ParameterRangeError(f"'{spec.family}' is not a Burgers family")
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.t_range
    X = np.empty((spec.m, spec.n))
    x = np.empty((spec.m, spec.n))
    metadata = []
    for i in range(spec.m):
        params = tuple(spec.alpha) if spec.alpha is not None else sample_ic_params(family, rng)
        t_i = float(rng.uniform(lo, hi)) if hi > lo else lo
        u0 = sample_ic(family, params, spec.n)
        X[i] = u0.values if t_i == 0.0 else burgers_solve_spectral(u0, spec.nu, t_i).values
        t_next = t_i + spec.tau
        x[i] = u0.values if t_next == 0.0 else burgers_solve_spectral(u0, spec.nu, t_next).values
        seed = _noise_seed(rng)
        if spec.noise > 0:
            noise_rng = np.random.default_rng(seed)
            X[i] += noise_rng.normal(0.0, spec.noise, spec.n)
            if spec.noise_targets:
                x[i] += noise_rng.normal(0.0, spec.noise, spec.n)
        metadata.append({"params": list(params), "t": t_i, "tau": spec.tau, "noise_seed": seed})
    logger.info("Generated %d %s pairs (nu=%g, tau=%g, noise=%g)", spec.m, spec.family, spec.nu, spec.tau, spec.noise)
    return SnapshotPairSet(X, x, metadata, {"family": spec.family, "nu": spec.nu, "tau": spec.tau, "n": spec.n})


def burgers_test_params(family: str, n_alpha: int = 100) -> list[tuple[float, ...]]:
    """Uniform IC-parameter grid used for evaluation tables."""
    if family == "u1":
        return [(float(a),) for a in np.linspace(0.0, 1.0, n_alpha)]
    if family == "periodic":
        return [(float(a),) for a in np.arange(n_alpha) / n_alpha]
    if family == "doubly_periodic":
        side = max(int(round(np.sqrt(n_alpha))), 1)
        axis = TWO_PI * np.arange(side) / side
        return [(float(a1), float(a2)) for a1 in axis for a2 in axis]
    raise ParameterRangeError(f"unknown initial-condition family '{family}'")


def burgers_test_set(spec: DatasetSpec, n_alpha: int = 100, steps: int = 4) -> TrajectorySet:
    """Trajectories from t0 = 0 at horizons k tau, k = 0..steps, over the uniform parameter grid."""
    family = BURGERS_IC.get(spec.family)
    if family is None:
        raise ParameterRangeError(f"'{spec.family}' is not a Burgers family")
    params = burgers_test_params(family, n_alpha)
    truth = np.empty((steps + 1, len(params), spec.n))
    for j, p in enumerate(params):
        u0 = sample_ic(family, p, spec.n)
        truth[0, j] = u0.values
        for k in range(1, steps + 1):
            truth[k, j] = burgers_solve_spectral(u0, spec.nu, k * spec.tau).values
    return TrajectorySet(truth[0].copy(), truth, spec.tau, params)


def _brusselator_run(alpha: float, spec: DatasetSpec, t_final: float) -> np.ndarray:
    params = BrusselatorParams(dt=spec.dt, integrator=spec.integrator)
    trajectory = brusselator_solve(brusselator_ic(alpha, spec.grid, spec.grid), params, t_final, spec.pair_stride)
    keep = trajectory.times >= spec.t_discard - 1e-9
    return trajectory.snapshots[keep]


def _brusselator_alphas(spec: DatasetSpec) -> list[float]:
    if spec.alphas is not None:
        return list(spec.alphas)
    rng = np.random.default_rng(spec.seed)
    return [float(a) for a in rng.uniform(0.0, 1.0, spec.trajectories)]


def _run_trajectories(alphas: list[float], spec: DatasetSpec, t_final: float, threads: int) -> list[np.ndarray]:
    if threads > 1 and len(alphas) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_brusselator_run, alphas, [spec] * len(alphas), [t_final] * len(alphas)))
    return [_brusselator_run(alpha, spec, t_final) for alpha in alphas]


def make_brusselator_dataset(spec: DatasetSpec, threads: int = 1) -> SnapshotPairSet:
    """
    Consecutive snapshot pairs pair_stride apart, after discarding t < t_discard.

    Each trajectory contributes ``pairs_per_trajectory`` pairs; trajectories run
    in worker processes when ``threads > 1`` and are collected in IC order.
    """
    alphas = _brusselator_alphas(spec)
    t_final = spec.t_discard + spec.pair_stride * spec.pairs_per_trajectory
    runs = _run_trajectories(alphas, spec, t_final, threads)
    X, x, metadata = [], [], []
    for alpha, snaps in zip(alphas, runs):
        for k in range(len(snaps) - 1):
            X.append(snaps[k])
            x.append(snaps[k + 1])
            metadata.append({"params": [alpha], "t": spec.t_discard + k * spec.pair_stride,
                             "tau": spec.pair_stride, "noise_seed": None})
    X, x = np.stack(X), np.stack(x)
    if spec.noise > 0:
        rng = np.random.default_rng([spec.seed, 1])
        X = X + rng.normal(0.0, spec.noise, X.shape)
        if spec.noise_targets:
            x = x + rng.normal(0.0, spec.noise, x.shape)
    logger.info("Generated %d Brusselator pairs from %d trajectories (%dx%d)", len(X), len(alphas), spec.grid, spec.grid)
    return SnapshotPairSet(X, x, metadata, {"family": "brusselator", "tau": spec.pair_stride, "grid": spec.grid})


def brusselator_test_set(spec: DatasetSpec, alphas: list[float], steps: int = 4, threads: int = 1) -> TrajectorySet:
    """Trajectories from t = t_discard at horizons k pair_stride."""
    t_final = spec.t_discard + spec.pair_stride * steps
    runs = _run_trajectories(list(alphas), spec, t_final, threads)
    truth = np.stack([snaps[:steps + 1] for snaps in runs], axis=1)
    return TrajectorySet(truth[0].copy(), truth, spec.pair_stride, [(a,) for a in alphas])


def arm_points(theta1, theta2, l1: float = 1.0, l2: float = 0.5) -> np.ndarray:
    """Joint positions (x1, x2) of a two-link arm; x1 = l1 e(theta1), x2 = x1 + l2 e(theta2)."""
    theta1, theta2 = np.atleast_1d(theta1), np.atleast_1d(theta2)
    x1 = l1 * np.stack([np.cos(theta1), np.sin(theta1)], axis=1)
    x2 = x1 + l2 * np.stack([np.cos(theta2), np.sin(theta2)], axis=1)
    return np.concatenate([x1, x2], axis=1)


def make_arm_dataset(n: int, l1: float = 1.0, l2: float = 0.5, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """
    Configurations of a two-link arm, a torus in R^4.

    Returns:
        (points, angles) of shapes (n, 4) and (n, 2), angles uniform on [0, 2pi)
    """
    if l1 <= 0 or l2 <= 0:
        raise ParameterRangeError(f"link lengths must be positive, got l1={l1}, l2={l2}")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, TWO_PI, (n, 2))
    return arm_points(angles[:, 0], angles[:, 1], l1, l2), angles


def klein_points(u: np.ndarray, a: float = 2.0, b: float = 1.0) -> np.ndarray:
    """Vectorized Klein-bottle embedding of parameter rows (u1, u2)."""
    u = np.atleast_2d(u)
    u1, u2 = u[:, 0], u[:, 1]
    ring = a + b * np.cos(u2)
    return np.stack([
        ring * np.cos(u1),
        ring * np.sin(u1),
        b * np.sin(u2) * np.cos(0.5 * u1),
        b * np.sin(u2) * np.sin(0.5 * u1),
    ], axis=1)


def make_klein_dataset(n: int, a: float = 2.0, b: float = 1.0, noise: float = 0.0,
                       seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """
    Points on the Klein bottle in R^4 with optional ambient Gaussian noise.

    Returns:
        (points, params) of shapes (n, 4) and (n, 2)
    """
    if not a > b > 0:
        raise ParameterRangeError(f"Klein bottle needs a > b > 0, got a={a}, b={b}")
    rng = np.random.default_rng(seed)
    params = rng.uniform(0.0, TWO_PI, (n, 2))
    points = klein_points(params, a, b)
    if noise > 0:
        points = points + rng.normal(0.0, noise, points.shape)
    return points, params


def make_mechanism_dataset(spec: DatasetSpec) -> SnapshotPairSet:
    """Autoencoding pairs (x, x) for the arm or Klein-bottle point clouds."""
    if spec.family == "arm":
        points, params = make_arm_dataset(spec.m, spec.l1, spec.l2, spec.seed)
        if spec.noise > 0:
            points = points + np.random.default_rng([spec.seed, 1]).normal(0.0, spec.noise, points.shape)
        info = {"family": "arm", "l1": spec.l1, "l2": spec.l2}
    elif spec.family == "klein":
        points, params = make_klein_dataset(spec.m, spec.a, spec.b, spec.noise, spec.seed)
        info = {"family": "klein", "a": spec.a, "b": spec.b}
    else:
        raise ParameterRangeError(f"'{spec.family}' is not a mechanism family")
    metadata = [{"params": [float(p) for p in row], "t": 0.0, "tau": 0.0, "noise_seed": None} for row in params]
    return SnapshotPairSet(points, points.copy(), metadata, info)


def generate_dataset(spec: DatasetSpec, threads: int = 1) -> SnapshotPairSet:
    """Dispatch on the dataset family."""
    if spec.family in BURGERS_IC:
        return make_burgers_dataset(spec)
    if spec.family == "brusselator":
        return make_brusselator_dataset(spec, threads)
    return make_mechanism_dataset(spec)
