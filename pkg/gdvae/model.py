"""The GD-VAE model: encoding onto the latent manifold, latent steps and the loss."""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.errors import ConfigError, NonFiniteError, ShapeError, TrainingDivergedError
from diffcore import ops
from diffcore.parameter import Parameter
from diffcore.tape import Tensor
from gdvae.config import ArchitectureSpec, LatentMapSpec, TrainingConfig
from gdvae.heads import GaussianHead
from gdvae.latent_maps import LatentMap
from manifold.atlas import ManifoldAtlas
from manifold.descriptor import AtlasDescriptor
from manifold.projection import projection_layer

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class GDVAEModel:
    """Encoder and decoder heads, latent map and optional manifold."""
    encoder: GaussianHead
    decoder: GaussianHead
    latent_map: LatentMap
    architecture: ArchitectureSpec
    map_spec: LatentMapSpec
    atlas: Optional[ManifoldAtlas] = None
    manifold: Optional[AtlasDescriptor] = None

    @property
    def embed_dim(self) -> int:
        return self.atlas.embed_dim if self.atlas is not None else self.architecture.latent_dim

    def parameters(self) -> list[Parameter]:
        """All trainable parameters in declaration order."""
        return self.encoder.parameters() + self.decoder.parameters() + self.latent_map.parameters()

    def parameter_count(self) -> int:
        return sum(p.size for p in self.parameters())

    def project(self, w) -> Tensor:
        if self.atlas is None:
            return ops.as_tensor(w)
        return projection_layer(w, self.atlas)

    def decode(self, z) -> Tensor:
        mean, _ = self.decoder(z)
        return mean


@dataclass
class Encoding:
    """Pre-projection mean w, its log-variance and the emitted code z."""
    w: Tensor
    log_var: Optional[Tensor]
    z: Tensor

    @property
    def variance(self) -> Optional[np.ndarray]:
        return None if self.log_var is None else np.exp(self.log_var.value)


def _check_input(model: GDVAEModel, X) -> Tensor:
    X = ops.as_tensor(X)
    expected = model.architecture.input_shape
    if X.shape[1:] != expected:
        raise ShapeError(f"encoder expects samples of shape {expected}, got batch {X.shape}")
    return X


def encode(model: GDVAEModel, X, rng: Optional[np.random.Generator] = None) -> Encoding:
    """
    Encode a batch.

    Args:
        model: The model
        X: Batch of inputs, shape (B, *input_shape)
        rng: Source of the reparameterization noise; None takes the mean path

    Returns:
        Encoding with w = a(X), its log-variance and z = Lambda(w + sigma_e xi)
        (z = w + sigma_e xi without a manifold)
    """
    X = _check_input(model, X)
    w, log_var = model.encoder(X)
    sample = w
    if rng is not None and log_var is not None:
        xi = rng.standard_normal(w.shape)
        sample = ops.add(w, ops.mul(ops.exp(ops.scale(log_var, 0.5)), xi))
    return Encoding(w=w, log_var=log_var, z=model.project(sample))


def latent_step(z, model: GDVAEModel) -> Tensor:
    """Apply the latent map once and re-project onto the manifold."""
    return model.project(model.latent_map(ops.as_tensor(z)))


def kl_diag_gaussian(mu, var, sigma0_sq: float) -> Tensor:
    """
    KL(N(mu, diag var) || N(0, sigma0^2 I)), summed over dimensions, averaged over the batch.

        sum_i ln(sigma0 / sigma_i) + (sigma_i^2 + mu_i^2) / (2 sigma0^2) - 1/2
    """
    mu, var = ops.as_tensor(mu), ops.as_tensor(var)
    per_dim = ops.add(
        ops.scale(ops.sub(np.log(sigma0_sq), ops.log(var)), 0.5),
        ops.scale(ops.add(var, ops.square(mu)), 0.5 / sigma0_sq),
    )
    per_dim = ops.sub(per_dim, 0.5)
    if per_dim.ndim == 1:
        return ops.sum(per_dim)
    return ops.mean(ops.sum(ops.reshape(per_dim, (per_dim.shape[0], -1)), axis=1))


def gaussian_nll(x, x_hat: Tensor, variance: float) -> tuple[Tensor, float]:
    """
    Decoder negative log-likelihood up to a constant: ||x - x_hat||^2 / (2 variance),
    summed over the sample and averaged over the batch.

    Returns:
        (weighted loss tensor, raw per-entry mean squared error)
    """
    residual = ops.sub(x_hat, x)
    flat = ops.reshape(ops.square(residual), (residual.shape[0], -1))
    weighted = ops.scale(ops.mean(ops.sum(flat, axis=1)), 0.5 / variance)
    return weighted, float(np.mean(residual.value ** 2))


@dataclass
class LossBreakdown:
    """The three loss terms, their sum and raw mean squared errors."""
    re: Tensor
    kl: Tensor
    rr: Tensor
    total: Tensor
    mse_re: float
    mse_rr: float

    def as_row(self) -> dict[str, float]:
        return {"L_RE": self.re.item(), "L_KL": self.kl.item(), "L_RR": self.rr.item(), "total": self.total.item()}


@contextmanager
def _term(name: str):
    try:
        yield
    except NonFiniteError as exc:
        raise TrainingDivergedError(f"non-finite value in {name}: {exc}", term=name) from exc


def _kl_columns(model: GDVAEModel, config: TrainingConfig) -> Optional[list[int]]:
    if config.kl_mode == "free-axes" and model.atlas is not None:
        return list(model.atlas.free_axes)
    return None


def elbo_loss(
    X,
    x,
    model: GDVAEModel,
    config: TrainingConfig,
    rng: Optional[np.random.Generator] = None,
) -> LossBreakdown:
    """
    Negative ELBO for a batch of snapshot pairs (X, x) one step apart.

        L_RE = NLL(x | decode(f(encode(X))))
        L_KL = beta KL(q(z | X) || N(0, sigma0^2))
        L_RR = gamma NLL(x | decode(encode(x)))
        total = L_RE + L_KL + L_RR

    With a manifold attached the KL acts on the pre-projection mean w, or only
    on the free axes when ``config.kl_mode == "free-axes"``.
    """
    x = ops.as_tensor(x)
    rng = rng if config.sample else None

    with _term("L_RE"):
        encoded = encode(model, X, rng)
        x_hat = model.decode(latent_step(encoded.z, model))
        if x_hat.shape != x.shape:
            raise ShapeError(f"decoder emits {x_hat.shape}, targets are {x.shape}")
        re, mse_re = gaussian_nll(x, x_hat, config.decoder_variance)

    with _term("L_KL"):
        columns = _kl_columns(model, config)
        if config.beta > 0.0 and columns != []:
            if encoded.log_var is None:
                raise ConfigError("KL term needs an encoder variance (sigma_e > 0)", "architecture.sigma_e")
            mu, log_var = encoded.w, encoded.log_var
            if columns is not None:
                mu, log_var = ops.select_columns(mu, columns), ops.select_columns(log_var, columns)
            kl = ops.scale(kl_diag_gaussian(mu, ops.exp(log_var), config.sigma0 ** 2), config.beta)
        else:
            kl = Tensor(0.0)

    with _term("L_RR"):
        if config.gamma > 0.0:
            reencoded = encode(model, x, rng)
            rr_raw, mse_rr = gaussian_nll(x, model.decode(reencoded.z), config.decoder_variance)
            rr = ops.scale(rr_raw, config.gamma)
        else:
            rr, mse_rr = Tensor(0.0), 0.0

    with _term("total"):
        total = ops.add(ops.add(re, kl), rr)
    return LossBreakdown(re=re, kl=kl, rr=rr, total=total, mse_re=mse_re, mse_rr=mse_rr)
