"""Gaussian encoder/decoder heads."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.errors import ConfigError
from diffcore import ops
from diffcore.layers import Layer
from diffcore.parameter import Parameter
from diffcore.tape import Tensor


@dataclass(eq=False)
class GaussianHead:
    """
    Conditional Gaussian: mean from ``trunk`` then ``mean``, variance either a
    fixed scalar or a learned layer on the trunk features.

    The variance is always held as a log-variance so it stays positive. A head
    with ``log_var=None`` and no variance layer is deterministic (variance 0).
    """
    trunk: Layer
    mean: Layer
    log_var: Optional[float] = None
    log_var_layer: Optional[Layer] = None

    def __post_init__(self):
        if self.log_var is not None and self.log_var_layer is not None:
            raise ConfigError("a head has either a fixed or a learned variance, not both")

    @classmethod
    def fixed(cls, trunk: Layer, mean: Layer, sigma: float) -> "GaussianHead":
        log_var = 2.0 * math.log(sigma) if sigma > 0 else None
        return cls(trunk, mean, log_var=log_var)

    @property
    def deterministic(self) -> bool:
        return self.log_var is None and self.log_var_layer is None

    def __call__(self, x) -> tuple[Tensor, Optional[Tensor]]:
        """Mean and log-variance (None for a deterministic head)."""
        features = self.trunk(ops.as_tensor(x))
        mu = self.mean(features)
        if self.log_var_layer is not None:
            return mu, self.log_var_layer(features)
        if self.log_var is not None:
            return mu, Tensor(np.full(mu.shape, self.log_var))
        return mu, None

    def set_variance(self, variance: float) -> None:
        if self.log_var_layer is not None:
            raise ConfigError("cannot fix the variance of a head with a learned variance")
        self.log_var = math.log(variance)

    def parameters(self) -> list[Parameter]:
        params = self.trunk.parameters() + self.mean.parameters()
        if self.log_var_layer is not None:
            params += self.log_var_layer.parameters()
        return params
