"""Variational autoencoders with manifold latent spaces and latent dynamics."""

from gdvae.config import ArchitectureSpec, LatentMapSpec, TrainingConfig
from gdvae.heads import GaussianHead
from gdvae.latent_maps import Decay, Identity, LatentMap, LearnableLinear, Rotate, Translate, build_latent_map
from gdvae.model import (
    Encoding,
    GDVAEModel,
    LossBreakdown,
    elbo_loss,
    encode,
    gaussian_nll,
    kl_diag_gaussian,
    latent_step,
)
from gdvae.architectures import build_architecture
from gdvae.training import HISTORY_COLUMNS, EpochRecord, TrainingHistory, epoch_rng, train
from gdvae.prediction import latent_codes, predict_multistep, reconstruct

__all__ = [
    "ArchitectureSpec",
    "LatentMapSpec",
    "TrainingConfig",
    "GaussianHead",
    "Decay",
    "Identity",
    "LatentMap",
    "LearnableLinear",
    "Rotate",
    "Translate",
    "build_latent_map",
    "Encoding",
    "GDVAEModel",
    "LossBreakdown",
    "elbo_loss",
    "encode",
    "gaussian_nll",
    "kl_diag_gaussian",
    "latent_step",
    "build_architecture",
    "HISTORY_COLUMNS",
    "EpochRecord",
    "TrainingHistory",
    "epoch_rng",
    "train",
    "latent_codes",
    "predict_multistep",
    "reconstruct",
]
