"""Continuity diagnostic for latent codes of a one-parameter periodic family.

A latent space whose topology cannot hold the family's circle tears it
somewhere: the codes run smoothly along most of the parameter range and then
jump back. The score is the largest cyclically adjacent code distance divided
by the median adjacent distance, so a well-embedded loop scores near 1 and a
torn one scores on the order of the grid size.
"""

from typing import Callable

import numpy as np

from config.errors import ParameterRangeError
from gdvae.model import GDVAEModel
from gdvae.prediction import latent_codes
from pde_data.initial_conditions import sample_ic

CONTINUITY_THRESHOLD = 10.0


def continuity_score_from_codes(codes: np.ndarray) -> float:
    """Score for codes ordered along the parameter grid, wrap pair included."""
    codes = np.asarray(codes, dtype=np.float64)
    if codes.ndim == 1:
        codes = codes[:, None]
    if codes.shape[0] < 3:
        raise ParameterRangeError(f"continuity needs a grid of at least 3 points, got {codes.shape[0]}")
    gaps = np.linalg.norm(np.roll(codes, -1, axis=0) - codes, axis=1)
    median = float(np.median(gaps))
    if median == 0.0:
        return 0.0 if gaps.max() == 0.0 else np.inf
    return float(gaps.max()) / median


def continuity_score(encoder: Callable[[np.ndarray], np.ndarray], alphas: np.ndarray) -> float:
    """
    Args:
        encoder: Maps a parameter grid (G,) to codes (G, d)
        alphas: Increasing grid over one period of the parameter
    """
    alphas = np.asarray(alphas, dtype=np.float64)
    if alphas.size < 3:
        raise ParameterRangeError(f"continuity needs a grid of at least 3 points, got {alphas.size}")
    return continuity_score_from_codes(encoder(alphas))


def family_encoder(model: GDVAEModel, family: str = "periodic", n: int = 100) -> Callable[[np.ndarray], np.ndarray]:
    """Encoder of initial conditions of a one-parameter family through the model's mean path."""

    def encode_grid(alphas: np.ndarray) -> np.ndarray:
        X = np.stack([sample_ic(family, a, n).values for a in alphas])
        return latent_codes(model, X)

    return encode_grid
