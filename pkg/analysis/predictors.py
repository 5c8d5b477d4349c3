"""Adapters exposing models, ROMs and oracles through one prediction protocol.

``trajectory(X0, steps)`` returns an array (steps + 1, B, *sample_shape); entry 0
is the zero-step reconstruction and entry k the prediction k steps ahead.
"""

import logging
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from baselines.linear_rom import LinearROM
from config.errors import ColeHopfTruncationError, ExtentMismatchError
from gdvae.model import GDVAEModel
from gdvae.prediction import predict_multistep, reconstruct
from pde_data.burgers import cole_hopf_rom
from pde_data.fields import Field1D

logger = logging.getLogger(__name__)


class Predictor(Protocol):
    def trajectory(self, X0: np.ndarray, steps: int) -> np.ndarray: ...


@dataclass
class ModelPredictor:
    model: GDVAEModel
    re_encode: bool = False

    def trajectory(self, X0: np.ndarray, steps: int) -> np.ndarray:
        first = reconstruct(self.model, X0)[None]
        if steps == 0:
            return first
        return np.concatenate([first, predict_multistep(self.model, X0, steps, self.re_encode)])


@dataclass
class ROMPredictor:
    rom: LinearROM

    def trajectory(self, X0: np.ndarray, steps: int) -> np.ndarray:
        X0 = np.asarray(X0, dtype=np.float64)
        flat = X0.reshape(X0.shape[0], -1)
        out = np.concatenate([self.rom.reconstruct(flat)[None], self.rom.predict(flat, steps)])
        return out.reshape((steps + 1,) + X0.shape)


@dataclass
class ColeHopfPredictor:
    """Truncated Cole-Hopf model; a breakdown of the truncation yields inf entries."""
    n_f: int
    nu: float
    tau: float

    def trajectory(self, X0: np.ndarray, steps: int) -> np.ndarray:
        X0 = np.asarray(X0, dtype=np.float64)
        out = np.empty((steps + 1,) + X0.shape)
        for j, row in enumerate(X0):
            u0 = Field1D(row)
            for k in range(steps + 1):
                try:
                    out[k, j] = cole_hopf_rom(u0, self.nu, k * self.tau, self.n_f).values
                except ColeHopfTruncationError as exc:
                    logger.warning("Cole-Hopf-%dD breakdown at item %d, t=%.2f: %s", self.n_f, j, k * self.tau, exc)
                    out[k, j] = np.inf
        return out


@dataclass
class OraclePredictor:
    """Returns the stored ground truth."""
    truth: np.ndarray

    def trajectory(self, X0: np.ndarray, steps: int) -> np.ndarray:
        if not np.array_equal(np.asarray(X0), self.truth[0]):
            raise ExtentMismatchError("oracle queried with a different initial batch than it stores")
        return self.truth[:steps + 1]
