"""Network layers built from diffcore ops."""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from diffcore.conv import conv2d, tconv2d
from diffcore.ops import ACTIVATIONS, activation, affine, reshape
from diffcore.parameter import Parameter
from diffcore.tape import Tensor


def _gain(kind: str) -> float:
    return 2.0 if kind in ("relu", "leaky_relu") else 1.0


class Layer:
    """Base layer: callable on a batch tensor, enumerates its parameters."""

    def __call__(self, x: Tensor) -> Tensor:
        raise NotImplementedError

    def parameters(self) -> list[Parameter]:
        return []

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(eq=False)
class Dense(Layer):
    """Affine map followed by an activation."""
    n_in: int
    n_out: int
    rng: np.random.Generator = field(repr=False)
    activation: str = "relu"
    slope: float = 0.0
    bias: bool = True
    name: str = "dense"

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"Unknown activation: {self.activation}")
        self.W = Parameter.normal((self.n_out, self.n_in), self.n_in, _gain(self.activation), self.rng, f"{self.name}.W")
        self.b = Parameter.zeros((self.n_out,), f"{self.name}.b") if self.bias else None

    def __call__(self, x: Tensor) -> Tensor:
        return activation(affine(x, self.W, self.b), self.activation, self.slope)

    def parameters(self) -> list[Parameter]:
        return [self.W] + ([self.b] if self.b is not None else [])

    def describe(self) -> dict:
        return {"type": "dense", "in": self.n_in, "out": self.n_out, "activation": self.activation,
                "slope": self.slope, "bias": self.bias}


@dataclass(eq=False)
class Conv2d(Layer):
    """(in-channels, out-channels, kernel-size, stride, padding) convolution + activation."""
    c_in: int
    c_out: int
    kernel: int
    stride: int
    padding: int
    rng: np.random.Generator = field(repr=False)
    activation: str = "relu"
    name: str = "conv"

    def __post_init__(self):
        fan_in = self.c_in * self.kernel * self.kernel
        self.K = Parameter.normal((self.c_out, self.c_in, self.kernel, self.kernel), fan_in,
                                  _gain(self.activation), self.rng, f"{self.name}.K")
        self.b = Parameter.zeros((self.c_out,), f"{self.name}.b")

    def __call__(self, x: Tensor) -> Tensor:
        y = conv2d(x, self.K, self.stride, self.padding, bias=self.b)
        return activation(y, self.activation)

    def parameters(self) -> list[Parameter]:
        return [self.K, self.b]

    def describe(self) -> dict:
        return {"type": "conv2d", "geometry": [self.c_in, self.c_out, self.kernel, self.stride, self.padding],
                "activation": self.activation}


@dataclass(eq=False)
class ConvTranspose2d(Layer):
    """Transpose convolution + activation; kernel stored (C_in, C_out, k, k)."""
    c_in: int
    c_out: int
    kernel: int
    stride: int
    padding: int
    rng: np.random.Generator = field(repr=False)
    activation: str = "relu"
    output_padding: int = 0
    name: str = "tconv"

    def __post_init__(self):
        fan_in = self.c_in * self.kernel * self.kernel
        self.K = Parameter.normal((self.c_in, self.c_out, self.kernel, self.kernel), fan_in,
                                  _gain(self.activation), self.rng, f"{self.name}.K")
        self.b = Parameter.zeros((self.c_out,), f"{self.name}.b")

    def __call__(self, x: Tensor) -> Tensor:
        y = tconv2d(x, self.K, self.stride, self.padding, bias=self.b, output_padding=self.output_padding)
        return activation(y, self.activation)

    def parameters(self) -> list[Parameter]:
        return [self.K, self.b]

    def describe(self) -> dict:
        return {"type": "tconv2d", "geometry": [self.c_in, self.c_out, self.kernel, self.stride, self.padding],
                "output_padding": self.output_padding, "activation": self.activation}


@dataclass(eq=False)
class Reshape(Layer):
    """Reshape each sample, keeping the batch axis."""
    shape: tuple[int, ...]

    def __call__(self, x: Tensor) -> Tensor:
        return reshape(x, (x.shape[0],) + tuple(self.shape))

    def describe(self) -> dict:
        return {"type": "reshape", "shape": list(self.shape)}


class Sequential(Layer):
    """Layers applied in order; parameters enumerate in declaration order."""

    def __init__(self, layers: Sequence[Layer]):
        self.layers = list(layers)

    def __call__(self, x: Tensor) -> Tensor:
        for layer in self.layers:
            x = layer(x)
        return x

    def parameters(self) -> list[Parameter]:
        params: list[Parameter] = []
        for layer in self.layers:
            params.extend(layer.parameters())
        return params

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def describe(self) -> list[dict]:
        return [layer.describe() for layer in self.layers]


def mlp(
    sizes: Sequence[int],
    rng: np.random.Generator,
    activation: str = "relu",
    slope: float = 0.0,
    final_activation: str = "identity",
    final_bias: bool = True,
    name: str = "mlp",
) -> Sequential:
    """
    Dense stack for layer sizes like (in)-400-400-(out).

    Hidden layers use ``activation``; the last layer uses ``final_activation``
    and carries a bias only if ``final_bias``.
    """
    layers: list[Layer] = []
    last = len(sizes) - 2
    for i, (n_in, n_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        is_last = i == last
        layers.append(Dense(
            n_in, n_out, rng,
            activation=final_activation if is_last else activation,
            slope=slope,
            bias=final_bias if is_last else True,
            name=f"{name}.{i}",
        ))
    return Sequential(layers)


def describe_network(net: Optional[Layer]) -> Optional[list[dict]]:
    if net is None:
        return None
    described = net.describe()
    return described if isinstance(described, list) else [described]
