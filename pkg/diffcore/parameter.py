"""Trainable parameters with gradient and Adam state."""

from dataclasses import dataclass, field

import numpy as np

from config.errors import ShapeError


@dataclass(eq=False)
class Parameter:
    """A trainable array, its accumulated gradient and optimizer moments."""
    value: np.ndarray
    name: str = ""
    grad: np.ndarray = field(init=False, repr=False)
    m: np.ndarray = field(init=False, repr=False)  # first moment
    v: np.ndarray = field(init=False, repr=False)  # second moment
    step: int = field(default=0, init=False)

    def __post_init__(self):
        self.value = np.array(self.value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)
        self.m = np.zeros_like(self.value)
        self.v = np.zeros_like(self.value)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    @property
    def size(self) -> int:
        return int(self.value.size)

    def zero_grad(self) -> None:
        self.grad = np.zeros_like(self.value)

    def accumulate(self, grad: np.ndarray) -> None:
        if grad.shape != self.value.shape:
            raise ShapeError(
                f"gradient shape {grad.shape} does not match parameter {self.name} {self.value.shape}"
            )
        self.grad = self.grad + grad

    def assign(self, value: np.ndarray) -> None:
        """Replace the value; the new array must keep the shape."""
        value = np.array(value, dtype=np.float64)
        if value.shape != self.value.shape:
            raise ShapeError(f"cannot assign shape {value.shape} to parameter {self.name} {self.shape}")
        self.value = value

    @classmethod
    def normal(cls, shape: tuple[int, ...], fan_in: int, gain: float, rng: np.random.Generator, name: str = "") -> "Parameter":
        """Zero-mean normal init with variance gain / fan_in (2 for relu layers, 1 for linear heads)."""
        std = np.sqrt(gain / max(fan_in, 1))
        return cls(rng.normal(0.0, std, size=shape), name=name)

    @classmethod
    def zeros(cls, shape: tuple[int, ...], name: str = "") -> "Parameter":
        return cls(np.zeros(shape), name=name)
