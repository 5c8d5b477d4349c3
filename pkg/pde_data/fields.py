"""Periodic field containers."""

from dataclasses import dataclass

import numpy as np

from config.errors import NonFiniteError, ShapeError


@dataclass(frozen=True, eq=False)
class Field1D:
    """u(x_k) at x_k = k/n on the periodic unit interval (no duplicated endpoint)."""
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 2:
            raise ShapeError(f"Field1D needs a 1D array of at least 2 values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteError("Field1D holds non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n) / self.n

    def mean(self) -> float:
        return float(np.mean(self.values))

    @classmethod
    def from_function(cls, fn, n: int = 100) -> "Field1D":
        return cls(fn(np.arange(n) / n))


@dataclass(frozen=True, eq=False)
class Field2D:
    """
    Two concentration channels on a periodic L_y x L_x grid with spacing dx.

    ``data`` has shape (2, L_y, L_x); x runs along the last axis.
    """
    data: np.ndarray
    dx: float = 1.0

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 3 or data.shape[0] != 2:
            raise ShapeError(f"Field2D needs shape (2, L_y, L_x), got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise NonFiniteError("Field2D holds non-finite values")
        object.__setattr__(self, "data", data)

    @classmethod
    def from_channels(cls, u: np.ndarray, v: np.ndarray, dx: float = 1.0) -> "Field2D":
        return cls(np.stack([u, v]), dx)

    @property
    def u(self) -> np.ndarray:
        return self.data[0]

    @property
    def v(self) -> np.ndarray:
        return self.data[1]

    @property
    def extent(self) -> tuple[int, int]:
        return int(self.data.shape[2]), int(self.data.shape[1])
