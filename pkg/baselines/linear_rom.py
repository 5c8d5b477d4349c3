"""Linear reduced-order models: POD with a fitted reduced operator, and exact DMD."""

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from config.errors import ParameterRangeError, SolverError

logger = logging.getLogger(__name__)

RANK_TOL = 1e-12


@dataclass
class LinearROM:
    """
    x ~ mean + basis @ a with the reduced state advanced by a_{k+1} = A a_k.

    DMD models additionally carry complex ``modes`` and ``eigenvalues``; their
    predictions evolve mode amplitudes fit to the initial state.
    """
    kind: Literal["pod", "dmd"]
    mean: np.ndarray
    basis: np.ndarray
    A: np.ndarray
    eigenvalues: np.ndarray
    singular_values: np.ndarray
    modes: Optional[np.ndarray] = None
    centered: bool = True
    info: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return int(self.basis.shape[1])

    @property
    def n(self) -> int:
        return int(self.basis.shape[0])

    def encode(self, x: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(x) - self.mean) @ self.basis

    def decode(self, a: np.ndarray) -> np.ndarray:
        return self.mean + a @ self.basis.T

    def reconstruct(self, x: np.ndarray) -> np.ndarray:
        return self.decode(self.encode(x))

    def predict(self, x0: np.ndarray, steps: int) -> np.ndarray:
        """
        States 1..steps after each row of x0.

        Returns:
            Array (steps, B, n)
        """
        x0 = np.atleast_2d(np.asarray(x0, dtype=np.float64))
        if x0.shape[1] != self.n:
            raise ParameterRangeError(f"ROM state has {self.n} entries, got {x0.shape[1]}")
        out = np.empty((steps, x0.shape[0], self.n))
        if self.kind == "dmd":
            amplitudes = np.linalg.lstsq(self.modes, (x0 - self.mean).T, rcond=None)[0]
            for k in range(steps):
                amplitudes = self.eigenvalues[:, None] * amplitudes
                out[k] = self.mean + np.real(self.modes @ amplitudes).T
            return out
        a = self.encode(x0)
        for k in range(steps):
            a = a @ self.A.T
            out[k] = self.decode(a)
        return out


def _prepare(snapshots: np.ndarray, r: int, center: bool) -> tuple[np.ndarray, np.ndarray]:
    data = np.asarray(snapshots, dtype=np.float64)
    data = data.reshape(data.shape[0], -1)
    if r < 1 or r > min(data.shape):
        raise ParameterRangeError(f"rank {r} needs 1 <= r <= min(#snapshots, n) = {min(data.shape)}")
    mean = data.mean(axis=0) if center else np.zeros(data.shape[1])
    return data, mean


def _truncated_svd(matrix: np.ndarray, r: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    U, s, Vt = np.linalg.svd(matrix, full_matrices=False)
    if s[0] == 0.0 or s[r - 1] <= RANK_TOL * s[0]:
        rank = int(np.sum(s > RANK_TOL * s[0])) if s[0] > 0 else 0
        raise SolverError(f"snapshot matrix has numerical rank {rank} < r = {r}")
    return U, s, Vt


def pod(snapshots: np.ndarray, r: int, targets: Optional[np.ndarray] = None, center: bool = True) -> LinearROM:
    """
    Proper orthogonal decomposition with a least-squares reduced evolution.

    The basis is the top-r left singular vectors of the (mean-centered) snapshot
    matrix. With ``targets`` the operator maps the coordinates of each snapshot to
    those of its target; otherwise it maps consecutive snapshots.

    Raises:
        SolverError: The snapshot matrix has rank below r
    """
    data, mean = _prepare(snapshots, r, center)
    U, s, _ = _truncated_svd((data - mean).T, r)
    basis = U[:, :r]
    if targets is not None:
        source = data
        target = np.asarray(targets, dtype=np.float64).reshape(data.shape)
    else:
        source, target = data[:-1], data[1:]
    a, a_next = (source - mean) @ basis, (target - mean) @ basis
    A = np.linalg.lstsq(a, a_next, rcond=None)[0].T if len(a) else np.eye(r)
    logger.debug("POD rank %d captures %.6f of the variance", r, np.sum(s[:r] ** 2) / np.sum(s ** 2))
    return LinearROM("pod", mean, basis, A, np.linalg.eigvals(A), s, centered=center)


def dmd(X: np.ndarray, Xp: np.ndarray, r: int, center: bool = True) -> LinearROM:
    """
    Exact DMD from snapshot pairs (X[i], Xp[i]).

    SVD of the input snapshots, A~ = U* X' V S^-1, eigendecomposition A~ W = W L,
    and modes Phi = X' V S^-1 W. With ``center`` both sides are shifted by the
    mean of X.

    Raises:
        SolverError: Singular values of X vanish below rank r
    """
    data, mean = _prepare(X, r, center)
    shifted = np.asarray(Xp, dtype=np.float64).reshape(data.shape)
    D, Dp = (data - mean).T, (shifted - mean).T
    U, s, Vt = _truncated_svd(D, r)
    U_r, s_r, V_r = U[:, :r], s[:r], Vt[:r].conj().T
    lifted = Dp @ V_r / s_r
    A = U_r.conj().T @ lifted
    eigenvalues, W = np.linalg.eig(A)
    modes = lifted @ W
    return LinearROM("dmd", mean, U_r, A, eigenvalues, s, modes=modes, centered=center)
