"""Parameterized initial-condition families."""

from typing import Sequence, Union

import numpy as np

from config.errors import ParameterRangeError
from pde_data.fields import Field1D, Field2D

TWO_PI = 2.0 * np.pi

IC_FAMILIES = ("u1", "periodic", "doubly_periodic")

# Parameter ranges per family, one (low, high) per component.
IC_RANGES = {
    "u1": ((0.0, 1.0),),
    "periodic": ((0.0, 1.0),),
    "doubly_periodic": ((0.0, TWO_PI), (0.0, TWO_PI)),
}


def _as_params(family: str, params: Union[float, Sequence[float]]) -> tuple[float, ...]:
    if family not in IC_RANGES:
        raise ParameterRangeError(f"unknown initial-condition family '{family}'; expected one of {IC_FAMILIES}")
    values = tuple(float(p) for p in np.atleast_1d(params))
    ranges = IC_RANGES[family]
    if len(values) != len(ranges):
        raise ParameterRangeError(f"family '{family}' takes {len(ranges)} parameter(s), got {len(values)}")
    for value, (low, high) in zip(values, ranges):
        if not low <= value <= high:
            raise ParameterRangeError(f"parameter {value} for '{family}' outside [{low}, {high:.6g}]")
    return values


def sample_ic(family: str, params: Union[float, Sequence[float]], n: int = 100) -> Field1D:
    """
    Closed-form initial field on n periodic grid points.

      u1:              alpha sin(2 pi x) + (1 - alpha) cos^3(2 pi x),         alpha in [0, 1]
      periodic:        cos(2 pi (x - alpha)),                                 alpha in [0, 1]
      doubly_periodic: cos a1 cos 2pi x + sin a1 sin 2pi x
                       + cos a2 cos 4pi x + sin a2 sin 4pi x,                 a1, a2 in [0, 2 pi]

    All three families are zero-mean.

    Raises:
        ParameterRangeError: Unknown family, wrong parameter count, or a value out of range
    """
    values = _as_params(family, params)
    x = np.arange(n) / n
    if family == "u1":
        (alpha,) = values
        u = alpha * np.sin(TWO_PI * x) + (1.0 - alpha) * np.cos(TWO_PI * x) ** 3
    elif family == "periodic":
        (alpha,) = values
        u = np.cos(TWO_PI * (x - alpha))
    else:
        a1, a2 = values
        u = (np.cos(a1) * np.cos(TWO_PI * x) + np.sin(a1) * np.sin(TWO_PI * x)
             + np.cos(a2) * np.cos(2 * TWO_PI * x) + np.sin(a2) * np.sin(2 * TWO_PI * x))
    return Field1D(u)


def sample_ic_params(family: str, rng: np.random.Generator) -> tuple[float, ...]:
    """Uniform draw from the family's parameter box."""
    if family not in IC_RANGES:
        raise ParameterRangeError(f"unknown initial-condition family '{family}'; expected one of {IC_FAMILIES}")
    return tuple(float(rng.uniform(low, high)) for low, high in IC_RANGES[family])


def brusselator_ic(alpha: float, lx: int = 64, ly: int = 64, dx: float = 1.0) -> Field2D:
    """
    u0 = alpha sin(2 pi x / Lx) + (1 - alpha) cos^3(2 pi x / Lx), constant in y;
    v0 the same profile along y, constant in x.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ParameterRangeError(f"alpha must lie in [0, 1], got {alpha}")

    def profile(coord: np.ndarray, length: float) -> np.ndarray:
        phase = TWO_PI * coord / length
        return alpha * np.sin(phase) + (1.0 - alpha) * np.cos(phase) ** 3

    x = np.arange(lx) * dx
    y = np.arange(ly) * dx
    u = np.broadcast_to(profile(x, lx * dx)[None, :], (ly, lx))
    v = np.broadcast_to(profile(y, ly * dx)[:, None], (ly, lx))
    return Field2D.from_channels(u, v, dx)
