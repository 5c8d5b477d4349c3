"""Central finite-difference checks against tape gradients."""

from typing import Callable, Optional, Sequence

import numpy as np

from config.errors import ShapeError
from diffcore.parameter import Parameter
from diffcore.tape import Tape, Tensor

ScalarFn = Callable[[Tensor], Tensor]


def _scalar(t: Tensor) -> float:
    if t.size != 1:
        raise ShapeError(f"finite-difference check needs a scalar function, got shape {t.shape}")
    return t.item()


def nudge_off_kinks(x: np.ndarray, h: float) -> np.ndarray:
    """Move coordinates within 2h of zero to 4h away so a relu kink is not straddled."""
    near = np.abs(x) < 2.0 * h
    direction = np.where(x < 0.0, -1.0, 1.0)
    return np.where(near, 4.0 * h * direction, x)


def finite_difference_check(
    f: ScalarFn,
    x: np.ndarray,
    h: float = 1e-6,
    eps: float = 1e-5,
    nudge: bool = True,
) -> float:
    """
    Max relative error between the tape gradient and central differences.

    Args:
        f: Scalar function of one tensor, built from diffcore ops
        x: Point to check at
        h: Finite-difference step
        eps: Floor added to |analytic| in the denominator
        nudge: Shift coordinates sitting on the relu kink at 0 before checking

    Returns:
        max_i |analytic_i - fd_i| / (|analytic_i| + eps)
    """
    x = np.array(x, dtype=np.float64)
    if nudge:
        x = nudge_off_kinks(x, h)

    with Tape() as tape:
        xt = tape.watch(x)
        y = f(xt)
        _scalar(y)
        (analytic,) = tape.gradient(y, [xt])

    numeric = np.zeros_like(x)
    flat = numeric.reshape(-1)
    for i in range(x.size):
        step = np.zeros(x.size)
        step[i] = h
        step = step.reshape(x.shape)
        plus = _scalar(f(Tensor(x + step)))
        minus = _scalar(f(Tensor(x - step)))
        flat[i] = (plus - minus) / (2.0 * h)

    return float(np.max(np.abs(analytic - numeric) / (np.abs(analytic) + eps)))


def check_parameter_gradients(
    loss_fn: Callable[[], Tensor],
    params: Sequence[Parameter],
    h: float = 1e-6,
    eps: float = 1e-5,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """
    Same check for a loss closed over model parameters.

    ``max_coords`` randomly subsamples coordinates per parameter for large models.
    """
    for param in params:
        param.zero_grad()
    with Tape() as tape:
        loss = loss_fn()
        _scalar(loss)
        tape.backward(loss)
    analytic = [param.grad.copy() for param in params]

    rng = rng or np.random.default_rng(0)
    worst = 0.0
    for param, grad in zip(params, analytic):
        coords = np.arange(param.size)
        if max_coords is not None and param.size > max_coords:
            coords = np.sort(rng.choice(param.size, size=max_coords, replace=False))
        original = param.value.copy()
        for c in coords:
            shifted = original.copy().reshape(-1)
            shifted[c] += h
            param.assign(shifted.reshape(original.shape))
            plus = _scalar(loss_fn())
            shifted[c] -= 2.0 * h
            param.assign(shifted.reshape(original.shape))
            minus = _scalar(loss_fn())
            numeric = (plus - minus) / (2.0 * h)
            a = grad.reshape(-1)[c]
            worst = max(worst, abs(a - numeric) / (abs(a) + eps))
        param.assign(original)
    for param in params:
        param.zero_grad()
    return float(worst)
