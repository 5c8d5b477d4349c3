"""Latent evolution maps z -> f(z)."""

from dataclasses import dataclass, field

import numpy as np

from config.errors import ConfigError
from diffcore import ops
from diffcore.parameter import Parameter
from diffcore.tape import Tensor
from gdvae.config import LatentMapSpec


class LatentMap:
    """One time step in latent space."""

    kind = "base"

    def __call__(self, z: Tensor) -> Tensor:
        raise NotImplementedError

    def parameters(self) -> list[Parameter]:
        return []


@dataclass(eq=False)
class Decay(LatentMap):
    """z -> rho z with rho = exp(-lambda0 tau)."""
    rho: float
    kind = "decay"

    def __post_init__(self):
        if not 0.0 < self.rho <= 1.0:
            raise ConfigError(f"decay factor must lie in (0, 1], got {self.rho}", "latent_map.rho")

    def __call__(self, z: Tensor) -> Tensor:
        return ops.scale(z, self.rho)


@dataclass(eq=False)
class Translate(LatentMap):
    """z -> z + dt e_axis; every other coordinate is unchanged."""
    dt: float
    axis: int
    embed_dim: int
    kind = "translate"

    def __post_init__(self):
        self.axis = _resolve_axis(self.axis, self.embed_dim)
        self.shift = np.zeros(self.embed_dim)
        self.shift[self.axis] = self.dt

    def __call__(self, z: Tensor) -> Tensor:
        return ops.add(z, self.shift)


@dataclass(eq=False)
class Rotate(LatentMap):
    """Rotation by omega dt in one coordinate plane; the other coordinates pass through."""
    omega: float
    dt: float
    plane: tuple[int, int]
    embed_dim: int
    kind = "rotate"

    def __post_init__(self):
        i, j = (_resolve_axis(p, self.embed_dim) for p in self.plane)
        if i == j:
            raise ConfigError(f"rotation plane needs two distinct axes, got {self.plane}", "latent_map.plane")
        angle = self.omega * self.dt
        self.matrix = np.eye(self.embed_dim)
        self.matrix[i, i] = self.matrix[j, j] = np.cos(angle)
        self.matrix[i, j] = -np.sin(angle)
        self.matrix[j, i] = np.sin(angle)

    def __call__(self, z: Tensor) -> Tensor:
        return ops.affine(z, self.matrix)


class Identity(LatentMap):
    kind = "identity"

    def __call__(self, z: Tensor) -> Tensor:
        return z


@dataclass(eq=False)
class LearnableLinear(LatentMap):
    """z -> A z with A trained alongside the networks (starts at the identity)."""
    embed_dim: int
    A: Parameter = field(init=False)
    kind = "learnable-linear"

    def __post_init__(self):
        self.A = Parameter(np.eye(self.embed_dim), name="latent_map.A")

    def __call__(self, z: Tensor) -> Tensor:
        return ops.affine(z, self.A)

    def parameters(self) -> list[Parameter]:
        return [self.A]


def _resolve_axis(axis: int, embed_dim: int) -> int:
    resolved = axis + embed_dim if axis < 0 else axis
    if not 0 <= resolved < embed_dim:
        raise ConfigError(f"axis {axis} outside a {embed_dim}-dimensional latent space", "latent_map.axis")
    return resolved


def build_latent_map(spec: LatentMapSpec, embed_dim: int) -> LatentMap:
    if spec.kind == "decay":
        return Decay(spec.decay_factor)
    if spec.kind == "translate":
        return Translate(spec.dt, spec.axis, embed_dim)
    if spec.kind == "rotate":
        return Rotate(spec.omega, spec.dt, spec.plane, embed_dim)
    if spec.kind == "learnable-linear":
        return LearnableLinear(embed_dim)
    return Identity()
