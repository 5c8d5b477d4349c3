"""Adam optimizer."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from config.errors import NonFiniteError, ShapeError
from diffcore.parameter import Parameter


def adam_step(
    params: Sequence[Parameter],
    grads: Optional[Sequence[np.ndarray]] = None,
    lr: float = 1e-3,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """
    One bias-corrected Adam update, in place on the parameters.

    Args:
        params: Parameters to update (moments and step count live on them)
        grads: Gradients per parameter; defaults to each parameter's accumulated grad
        lr, beta1, beta2, eps: Usual Adam hyperparameters

    Raises:
        ShapeError: Gradient shape differs from its parameter
        NonFiniteError: Any gradient holds NaN/Inf (no parameter is touched)
    """
    if grads is None:
        grads = [p.grad for p in params]
    if len(grads) != len(params):
        raise ShapeError(f"{len(grads)} gradients for {len(params)} parameters")

    for param, grad in zip(params, grads):
        if grad.shape != param.shape:
            raise ShapeError(f"gradient shape {grad.shape} for parameter {param.name} {param.shape}")
        if not np.all(np.isfinite(grad)):
            raise NonFiniteError(f"non-finite gradient for parameter {param.name}")

    for param, grad in zip(params, grads):
        param.step += 1
        param.m = beta1 * param.m + (1.0 - beta1) * grad
        param.v = beta2 * param.v + (1.0 - beta2) * grad * grad
        m_hat = param.m / (1.0 - beta1 ** param.step)
        v_hat = param.v / (1.0 - beta2 ** param.step)
        param.value = param.value - lr * m_hat / (np.sqrt(v_hat) + eps)


@dataclass
class Adam:
    """Adam over a fixed parameter list."""
    params: list[Parameter]
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def zero_grad(self) -> None:
        for param in self.params:
            param.zero_grad()

    def step(self) -> None:
        adam_step(self.params, lr=self.lr, beta1=self.beta1, beta2=self.beta2, eps=self.eps)
