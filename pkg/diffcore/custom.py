"""Tape nodes whose value and Jacobian come from outside the tape's own rules."""

from typing import Any, Callable

import numpy as np

from config.errors import ExtentMismatchError
from diffcore.ops import Operand, _record, as_tensor
from diffcore.tape import Tensor

Forward = Callable[[np.ndarray], tuple[np.ndarray, Any]]
JacobianApply = Callable[[Any, np.ndarray], np.ndarray]


def custom_gradient_node(x: Operand, forward: Forward, jacobian_apply: JacobianApply, name: str = "custom") -> Tensor:
    """
    Record an op with a user supplied vector-Jacobian product.

    Args:
        x: Input operand
        forward: Maps the input array to ``(output, ctx)``; ctx is handed to jacobian_apply
        jacobian_apply: ``(ctx, upstream) -> gradient wrt input``; upstream has the output's
            extent and the result must have the input's extent
        name: Label stored on the tape entry

    Returns:
        The output tensor

    Raises:
        ExtentMismatchError: If jacobian_apply does not map output extents to input extents
    """
    x = as_tensor(x)
    out, ctx = forward(x.value)
    out = np.asarray(out, dtype=np.float64)

    probe = np.asarray(jacobian_apply(ctx, np.zeros_like(out)))
    if probe.shape != x.shape:
        raise ExtentMismatchError(
            f"{name}: jacobian_apply maps output extent {out.shape} to {probe.shape}, input is {x.shape}"
        )

    def backward(g):
        grad = np.asarray(jacobian_apply(ctx, g), dtype=np.float64)
        if grad.shape != x.shape:
            raise ExtentMismatchError(f"{name}: gradient extent {grad.shape} != input extent {x.shape}")
        return (grad,)

    return _record([x], out, backward, name)
