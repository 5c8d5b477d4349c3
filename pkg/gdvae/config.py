"""Validated model, latent-map and training configuration."""

import math
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

ArchitectureName = Literal[
    "burgers-mlp",
    "linear-2d",
    "periodic-mlp",
    "mechanics-mlp",
    "brusselator-cnn",
    "brusselator-cnn-32",
    "custom",
]


class ArchitectureSpec(BaseModel):
    """Encoder/decoder network choice and the encoder variance source."""

    name: ArchitectureName = "burgers-mlp"
    input_dim: int = Field(default=100, ge=1)
    latent_dim: int = Field(default=2, ge=1)
    hidden: Optional[list[int]] = None
    activation: Literal["relu", "leaky_relu", "identity"] = "relu"
    slope: float = Field(default=1e-6, ge=0)
    sigma_e: float = Field(default=4e-3, ge=0)
    variance: Literal["fixed", "network"] = "fixed"

    @model_validator(mode="after")
    def _check(self) -> "ArchitectureSpec":
        if self.name == "custom" and self.hidden is None:
            raise ValueError("custom architecture needs a hidden layer list")
        if self.variance == "network" and self.sigma_e <= 0:
            raise ValueError("a variance network needs sigma_e > 0 for its initial bias")
        return self

    @property
    def is_conv(self) -> bool:
        return self.name.startswith("brusselator-cnn")

    @property
    def grid(self) -> int:
        return 32 if self.name == "brusselator-cnn-32" else 64

    @property
    def input_shape(self) -> tuple[int, ...]:
        if self.is_conv:
            return (2, self.grid, self.grid)
        return (self.input_dim,)


class LatentMapSpec(BaseModel):
    """Latent evolution map f applied once per time step."""

    kind: Literal["decay", "translate", "rotate", "identity", "learnable-linear"] = "decay"
    rho: Optional[float] = Field(default=None, gt=0, le=1)
    lambda0: Optional[float] = Field(default=None, ge=0)
    tau: float = Field(default=0.25, gt=0)
    dt: float = 0.25
    axis: int = -1
    omega: float = 0.282
    plane: tuple[int, int] = (0, 1)

    @property
    def decay_factor(self) -> float:
        """rho, or exp(-lambda0 tau) when given as a rate; 0.75 when neither is set."""
        if self.rho is not None:
            return self.rho
        if self.lambda0 is not None:
            return math.exp(-self.lambda0 * self.tau)
        return 0.75


class TrainingConfig(BaseModel):
    """Loss weights, prior, optimizer and schedule."""

    beta: float = Field(default=1.0, ge=0)
    gamma: float = Field(default=0.5, ge=0)
    sigma0: float = Field(default=1.0, gt=0)
    # sigma_d^2 of the decoder; reconstruction terms are weighted by 1 / (2 decoder_variance)
    decoder_variance: float = Field(default=1e-4, gt=0)
    kl_mode: Literal["pre-projection", "free-axes"] = "pre-projection"
    lr: float = Field(default=1e-3, gt=0)
    beta1: float = Field(default=0.9, ge=0, lt=1)
    beta2: float = Field(default=0.999, ge=0, lt=1)
    eps: float = Field(default=1e-8, gt=0)
    batch_size: int = Field(default=100, ge=1)
    epochs: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)
    sample: bool = True
