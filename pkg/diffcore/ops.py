"""Differentiable tensor operations.

Each op computes its value eagerly and, when a tape is active, records a
backward rule mapping the upstream gradient to one gradient per input.
Constants (arrays, floats) broadcast with numpy rules; tracked operands get
their gradient summed back to their own shape.
"""

from typing import Optional, Sequence, Union

import numpy as np

from config.errors import ShapeError
from diffcore.parameter import Parameter
from diffcore.tape import Tape, Tensor, active_tape

Operand = Union[Tensor, Parameter, np.ndarray, float, int]

ACTIVATIONS = ("relu", "leaky_relu", "identity")


def as_tensor(x: Operand) -> Tensor:
    """Lift parameters onto the active tape and wrap constants."""
    if isinstance(x, Tensor):
        return x
    if isinstance(x, Parameter):
        tape = active_tape()
        if tape is not None:
            return tape.lift(x)
        return Tensor._wrap(x.value, None, None, f"parameter {x.name}")
    return Tensor(x)


def _record(inputs: Sequence[Tensor], value: np.ndarray, backward, name: str) -> Tensor:
    tape: Optional[Tape] = active_tape()
    if tape is None:
        return Tensor._wrap(value, None, None, name)
    return tape.record(inputs, value, backward, name)


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


# Elementwise algebra


def add(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    value = a.value + b.value
    return _record(
        [a, b], value,
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape)),
        "add",
    )


def sub(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    value = a.value - b.value
    return _record(
        [a, b], value,
        lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)),
        "sub",
    )


def mul(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    value = a.value * b.value
    return _record(
        [a, b], value,
        lambda g: (_unbroadcast(g * b.value, a.shape), _unbroadcast(g * a.value, b.shape)),
        "mul",
    )


def neg(x: Operand) -> Tensor:
    x = as_tensor(x)
    return _record([x], -x.value, lambda g: (-g,), "neg")


def scale(x: Operand, factor: float) -> Tensor:
    x = as_tensor(x)
    factor = float(factor)
    return _record([x], factor * x.value, lambda g: (factor * g,), "scale")


def square(x: Operand) -> Tensor:
    x = as_tensor(x)
    return _record([x], x.value * x.value, lambda g: (2.0 * x.value * g,), "square")


def exp(x: Operand) -> Tensor:
    x = as_tensor(x)
    value = np.exp(x.value)
    return _record([x], value, lambda g: (g * value,), "exp")


def log(x: Operand) -> Tensor:
    x = as_tensor(x)
    if np.any(x.value <= 0.0):
        raise ShapeError("log of a non-positive value")
    return _record([x], np.log(x.value), lambda g: (g / x.value,), "log")


# Reductions and shape


def sum(x: Operand, axis: Optional[int] = None) -> Tensor:  # noqa: A001
    x = as_tensor(x)
    value = np.sum(x.value, axis=axis)

    def backward(g):
        if axis is None:
            return (np.full(x.shape, float(np.asarray(g).reshape(()))),)
        return (np.broadcast_to(np.expand_dims(g, axis), x.shape).copy(),)

    return _record([x], value, backward, "sum")


def mean(x: Operand, axis: Optional[int] = None) -> Tensor:
    x = as_tensor(x)
    count = x.size if axis is None else x.shape[axis]
    return scale(sum(x, axis=axis), 1.0 / count)


def reshape(x: Operand, shape: Sequence[int]) -> Tensor:
    x = as_tensor(x)
    value = x.value.reshape(tuple(shape))
    return _record([x], value, lambda g: (g.reshape(x.shape),), "reshape")


def index(x: Operand, key) -> Tensor:
    """Basic or integer-array indexing; gradient scatters back with np.add.at."""
    x = as_tensor(x)
    value = np.array(x.value[key])

    def backward(g):
        grad = np.zeros_like(x.value)
        np.add.at(grad, key, g)
        return (grad,)

    return _record([x], value, backward, "index")


def select_columns(x: Operand, columns: Sequence[int]) -> Tensor:
    """Columns of the last axis, in the given order."""
    x = as_tensor(x)
    columns = [int(c) for c in columns]
    value = x.value[..., columns]

    def backward(g):
        grad = np.zeros_like(x.value)
        for position, column in enumerate(columns):
            grad[..., column] += g[..., position]
        return (grad,)

    return _record([x], value, backward, "select_columns")


# Network primitives


def affine(x: Operand, W: Operand, b: Optional[Operand] = None) -> Tensor:
    """
    y = W x + b applied along the last axis of x.

    Args:
        x: Input of shape (..., in)
        W: Weights of shape (out, in)
        b: Optional bias of shape (out,)

    Returns:
        Tensor of shape (..., out)
    """
    x, W = as_tensor(x), as_tensor(W)
    if W.ndim != 2 or x.shape[-1] != W.shape[1]:
        raise ShapeError(f"affine: input extent {x.shape} does not conform to weights {W.shape}")
    inputs = [x, W]
    value = x.value @ W.value.T
    if b is not None:
        b = as_tensor(b)
        if b.shape != (W.shape[0],):
            raise ShapeError(f"affine: bias shape {b.shape} does not match {W.shape[0]} outputs")
        value = value + b.value
        inputs.append(b)

    n_out, n_in = W.shape

    def backward(g):
        g2 = g.reshape(-1, n_out)
        x2 = x.value.reshape(-1, n_in)
        grads = [g @ W.value, g2.T @ x2]
        if b is not None:
            grads.append(g2.sum(axis=0))
        return grads

    return _record(inputs, value, backward, "affine")


def activation(x: Operand, kind: str = "relu", slope: float = 0.0) -> Tensor:
    """
    Elementwise relu, leaky relu or identity.

    The relu derivative at exactly 0 is taken as 0; the leaky variant uses the
    slope there.
    """
    x = as_tensor(x)
    if kind == "identity":
        return x
    if kind == "relu":
        slope = 0.0
    elif kind != "leaky_relu":
        raise ValueError(f"Unknown activation: {kind}")
    mask = x.value > 0.0
    factor = np.where(mask, 1.0, slope)
    return _record([x], x.value * factor, lambda g: (g * factor,), kind)


def relu(x: Operand) -> Tensor:
    return activation(x, "relu")


def leaky_relu(x: Operand, slope: float = 1e-6) -> Tensor:
    return activation(x, "leaky_relu", slope)
