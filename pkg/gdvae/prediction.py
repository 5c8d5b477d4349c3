"""Inference along the mean path: reconstruction and multi-step prediction."""

import numpy as np

from gdvae.model import GDVAEModel, encode, latent_step


def reconstruct(model: GDVAEModel, X) -> np.ndarray:
    """decode(encode(X)) without sampling noise (the zero-step prediction)."""
    return model.decode(encode(model, X).z).numpy()


def latent_codes(model: GDVAEModel, X) -> np.ndarray:
    """Emitted codes z for a batch, mean path."""
    return encode(model, X).z.numpy()


def predict_multistep(model: GDVAEModel, X0, n: int, re_encode: bool = False) -> np.ndarray:
    """
    Predict n steps ahead from X0.

    The batch is encoded once and the code is advanced by the latent map, with
    every intermediate code decoded. With ``re_encode`` each prediction is
    encoded again before the next step instead.

    Returns:
        Array of shape (n, B, *sample_shape) holding x_hat_1 .. x_hat_n
    """
    z = encode(model, X0).z
    outputs = []
    for _ in range(n):
        z = latent_step(z, model)
        x_hat = model.decode(z)
        outputs.append(x_hat.numpy())
        if re_encode:
            z = encode(model, x_hat).z
    if not outputs:
        return np.zeros((0,) + np.shape(X0))
    return np.stack(outputs)
