"""Error metrics."""

import numpy as np

from config.errors import ExtentMismatchError, ZeroNormError


def l1_relative_error(pred, truth) -> float:
    """||pred - truth||_1 / ||truth||_1 over all entries."""
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise ExtentMismatchError(f"prediction {pred.shape} and truth {truth.shape} differ in shape")
    norm = float(np.sum(np.abs(truth)))
    if norm == 0.0:
        raise ZeroNormError("relative error undefined for a zero truth field")
    return float(np.sum(np.abs(pred - truth))) / norm


def per_item_l1_errors(pred: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """l1_relative_error for every item along the first axis."""
    pred, truth = np.asarray(pred, dtype=np.float64), np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise ExtentMismatchError(f"prediction {pred.shape} and truth {truth.shape} differ in shape")
    return np.array([l1_relative_error(p, t) if np.all(np.isfinite(p)) else np.inf for p, t in zip(pred, truth)])
