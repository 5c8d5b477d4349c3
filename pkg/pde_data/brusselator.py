"""Brusselator reaction-diffusion on a periodic 2D grid.

    u_t = D1 lap(u) + a - (1 + b) u + v u^2
    v_t = D2 lap(v) + b u - v u^2

The Laplacian is the 5-point central-difference stencil with periodic wrap.
"""

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from config.errors import ParameterRangeError, SolverError
from pde_data.fields import Field2D

logger = logging.getLogger(__name__)

Integrator = Literal["explicit-euler", "semi-implicit", "rk4"]
INTEGRATORS = ("explicit-euler", "semi-implicit", "rk4")
BLOWUP_BOUND = 1e6


@dataclass(frozen=True)
class BrusselatorParams:
    d1: float = 1.0
    d2: float = 0.1
    a: float = 1.0
    b: float = 3.0
    dt: float = 1e-3
    dx: float = 1.0
    integrator: Integrator = "explicit-euler"

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 0:
            raise ParameterRangeError(f"diffusivities must be non-negative, got D1={self.d1}, D2={self.d2}")
        if self.dt <= 0 or self.dx <= 0:
            raise ParameterRangeError(f"dt and dx must be positive, got dt={self.dt}, dx={self.dx}")
        if self.integrator not in INTEGRATORS:
            raise ParameterRangeError(f"unknown integrator '{self.integrator}'; expected one of {INTEGRATORS}")
        if self.integrator != "semi-implicit" and self.dt > self.explicit_dt_limit:
            raise ParameterRangeError(
                f"dt={self.dt} exceeds the explicit diffusion bound {self.explicit_dt_limit:.4g}"
            )

    @property
    def explicit_dt_limit(self) -> float:
        """dx^2 / (4 D_max) for the 5-point stencil."""
        d_max = max(self.d1, self.d2)
        return np.inf if d_max == 0 else self.dx ** 2 / (4.0 * d_max)

    @property
    def fixed_point(self) -> tuple[float, float]:
        return self.a, self.b / self.a


@dataclass
class BrusselatorTrajectory:
    """Snapshots (T, 2, L_y, L_x) at ``times``."""
    times: np.ndarray
    snapshots: np.ndarray
    params: BrusselatorParams
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.times)

    def at(self, index: int) -> Field2D:
        return Field2D(self.snapshots[index], self.params.dx)


def laplacian(c: np.ndarray, dx: float) -> np.ndarray:
    """5-point periodic Laplacian over the last two axes."""
    return (np.roll(c, 1, axis=-1) + np.roll(c, -1, axis=-1)
            + np.roll(c, 1, axis=-2) + np.roll(c, -1, axis=-2) - 4.0 * c) / dx ** 2


def reaction(data: np.ndarray, params: BrusselatorParams) -> np.ndarray:
    u, v = data[0], data[1]
    uuv = v * u * u
    return np.stack([params.a - (1.0 + params.b) * u + uuv, params.b * u - uuv])


def rhs(data: np.ndarray, params: BrusselatorParams) -> np.ndarray:
    diffusivity = np.array([params.d1, params.d2])[:, None, None]
    return diffusivity * laplacian(data, params.dx) + reaction(data, params)


def _laplacian_symbol(ly: int, lx: int, dx: float) -> np.ndarray:
    ky = np.fft.fftfreq(ly)[:, None]
    kx = np.fft.fftfreq(lx)[None, :]
    return (2.0 * np.cos(2 * np.pi * kx) + 2.0 * np.cos(2 * np.pi * ky) - 4.0) / dx ** 2


def _stepper(params: BrusselatorParams, shape: tuple[int, ...]):
    dt = params.dt
    if params.integrator == "explicit-euler":
        return lambda c: c + dt * rhs(c, params)
    if params.integrator == "rk4":
        def rk4(c):
            k1 = rhs(c, params)
            k2 = rhs(c + 0.5 * dt * k1, params)
            k3 = rhs(c + 0.5 * dt * k2, params)
            k4 = rhs(c + dt * k3, params)
            return c + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        return rk4
    # Implicit diffusion through the stencil's Fourier symbol, explicit reaction.
    symbol = _laplacian_symbol(shape[1], shape[2], params.dx)
    diffusivity = np.array([params.d1, params.d2])[:, None, None]
    denom = 1.0 - dt * diffusivity * symbol[None]

    def semi_implicit(c):
        explicit = np.fft.fft2(c + dt * reaction(c, params))
        return np.real(np.fft.ifft2(explicit / denom))
    return semi_implicit


def brusselator_solve(
    initial: Field2D,
    params: BrusselatorParams,
    t_final: float,
    stride: float = 1.0,
) -> BrusselatorTrajectory:
    """
    Integrate from ``initial`` to ``t_final`` recording a snapshot every ``stride``
    time units (t = 0 included).

    Raises:
        ParameterRangeError: stride is not a positive multiple of dt, or t_final < 0
        SolverError: The field became non-finite or exceeded the blow-up bound
    """
    if t_final < 0:
        raise ParameterRangeError(f"t_final must be non-negative, got {t_final}")
    stride_steps = int(round(stride / params.dt))
    if stride_steps < 1 or not np.isclose(stride_steps * params.dt, stride, rtol=1e-9, atol=0.0):
        raise ParameterRangeError(f"stride {stride} is not a positive multiple of dt={params.dt}")
    n_steps = int(round(t_final / params.dt))

    step = _stepper(params, initial.data.shape)
    state = initial.data.copy()
    times, snapshots = [0.0], [state.copy()]
    for i in range(1, n_steps + 1):
        state = step(state)
        if i % stride_steps == 0 or i == n_steps:
            if not np.all(np.isfinite(state)) or np.max(np.abs(state)) > BLOWUP_BOUND:
                raise SolverError(f"Brusselator blew up before t={i * params.dt:.3f} ({params.integrator})")
            if i % stride_steps == 0:
                times.append(i * params.dt)
                snapshots.append(state.copy())
    logger.debug("Brusselator %s: %d steps, %d snapshots", params.integrator, n_steps, len(times))
    return BrusselatorTrajectory(np.array(times), np.stack(snapshots), params)
