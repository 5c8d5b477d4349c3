"""Architecture presets and model construction."""

import logging
import math
from typing import Optional

import numpy as np

from config.errors import ConfigError
from diffcore.layers import Conv2d, ConvTranspose2d, Dense, Layer, Reshape, Sequential, mlp
from gdvae.config import ArchitectureSpec, LatentMapSpec
from gdvae.heads import GaussianHead
from gdvae.latent_maps import build_latent_map
from gdvae.model import GDVAEModel
from manifold.descriptor import AtlasDescriptor

logger = logging.getLogger(__name__)

# (in-channels, out-channels, kernel-size, stride, padding)
CNN_64 = [(2, 10, 3, 3, 1), (10, 20, 3, 3, 1), (20, 40, 2, 2, 1), (40, 100, 5, 1, 0)]
CNN_32 = [(2, 10, 4, 2, 1), (10, 20, 4, 2, 1), (20, 40, 4, 2, 1), (40, 100, 4, 1, 0)]

DEFAULT_HIDDEN = {
    "burgers-mlp": [400, 400],
    "periodic-mlp": [400, 400],
    "mechanics-mlp": [100, 500, 100],
    "linear-2d": [],
}


def _split(net: Sequential) -> tuple[Sequential, Layer]:
    return Sequential(net.layers[:-1]), net.layers[-1]


def _mlp_pair(spec: ArchitectureSpec, embed_dim: int, rng: np.random.Generator):
    hidden = spec.hidden if spec.hidden is not None else DEFAULT_HIDDEN[spec.name]
    if spec.name == "mechanics-mlp":
        activation, slope = "leaky_relu", spec.slope
    elif spec.name == "linear-2d":
        activation, slope = "identity", 0.0
    elif spec.name == "custom":
        activation, slope = spec.activation, spec.slope
    else:
        activation, slope = "relu", 0.0
    final_bias = spec.name != "periodic-mlp"
    encoder = mlp([spec.input_dim, *hidden, embed_dim], rng, activation, slope,
                  final_bias=final_bias, name="encoder")
    decoder = mlp([embed_dim, *hidden, spec.input_dim], rng, activation, slope,
                  final_bias=final_bias, name="decoder")
    return encoder, decoder


def _cnn_pair(spec: ArchitectureSpec, embed_dim: int, rng: np.random.Generator):
    geometry = CNN_32 if spec.name == "brusselator-cnn-32" else CNN_64
    layers: list[Layer] = []
    for i, (c_in, c_out, k, s, p) in enumerate(geometry):
        last = i == len(geometry) - 1
        layers.append(Conv2d(c_in, c_out, k, s, p, rng, activation="identity" if last else "relu",
                             name=f"encoder.{i}"))
    features = geometry[-1][1]
    layers += [Reshape((features,)), Dense(features, embed_dim, rng, activation="identity", name="encoder.mlp")]
    encoder = Sequential(layers)

    layers = [Dense(embed_dim, features, rng, activation="relu", name="decoder.mlp"), Reshape((features, 1, 1))]
    mirrored = [(c_out, c_in, k, s, p) for (c_in, c_out, k, s, p) in reversed(geometry)]
    for i, (c_in, c_out, k, s, p) in enumerate(mirrored):
        last = i == len(mirrored) - 1
        layers.append(ConvTranspose2d(c_in, c_out, k, s, p, rng, activation="identity" if last else "relu",
                                      name=f"decoder.{i}"))
    return encoder, Sequential(layers)


def build_architecture(
    spec: ArchitectureSpec,
    latent_map: Optional[LatentMapSpec] = None,
    manifold: Optional[AtlasDescriptor] = None,
    seed: int = 0,
    point_cloud_resolution: int = 64,
) -> GDVAEModel:
    """
    Construct a model from a preset or custom layer list.

    Args:
        spec: Architecture preset and encoder variance choice
        latent_map: Latent evolution map (identity when omitted)
        manifold: Latent manifold; its embedding dim must equal spec.latent_dim
        seed: Weight initialization seed
        point_cloud_resolution: Seed-cloud resolution for chart-projected manifolds

    Raises:
        ConfigError: Latent dims inconsistent with the manifold or the preset
    """
    latent_map = latent_map or LatentMapSpec(kind="identity")
    atlas = manifold.build(point_cloud_resolution) if manifold is not None else None
    embed_dim = spec.latent_dim
    if atlas is not None and atlas.embed_dim != embed_dim:
        raise ConfigError(
            f"latent_dim {embed_dim} does not match the {atlas.tag} embedding dim {atlas.embed_dim}",
            "architecture.latent_dim",
        )
    if spec.name == "linear-2d" and embed_dim != 2:
        raise ConfigError(f"linear-2d has a 2-dimensional latent space, got {embed_dim}", "architecture.latent_dim")

    rng = np.random.default_rng(seed)
    encoder, decoder = _cnn_pair(spec, embed_dim, rng) if spec.is_conv else _mlp_pair(spec, embed_dim, rng)

    trunk, mean = _split(encoder)
    if spec.variance == "network":
        n_features = mean.n_in
        log_var_layer = Dense(n_features, embed_dim, rng, activation="identity", name="encoder.log_var")
        log_var_layer.b.assign(np.full(embed_dim, 2.0 * math.log(spec.sigma_e)))
        encoder_head = GaussianHead(trunk, mean, log_var_layer=log_var_layer)
    else:
        encoder_head = GaussianHead.fixed(trunk, mean, spec.sigma_e)
    decoder_trunk, decoder_mean = _split(decoder)
    decoder_head = GaussianHead.fixed(decoder_trunk, decoder_mean, 1e-2)

    model = GDVAEModel(
        encoder=encoder_head,
        decoder=decoder_head,
        latent_map=build_latent_map(latent_map, embed_dim),
        architecture=spec,
        map_spec=latent_map,
        atlas=atlas,
        manifold=manifold,
    )
    logger.info("Built %s with %d parameters (latent %s, map %s)", spec.name, model.parameter_count(),
                atlas.tag if atlas else f"R^{embed_dim}", latent_map.kind)
    return model
