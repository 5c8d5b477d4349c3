"""Multi-step error tables.

CSV layout: ``method,dim,h0,h0_se,h1,h1_se,...`` with one row per method; the
horizon in seconds of each ``hK`` column and the trial counts live in a JSON
sidecar next to the CSV.
"""

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from analysis.metrics import per_item_l1_errors
from analysis.predictors import Predictor
from config.errors import MissingTrialError
from pde_data.datasets import TrajectorySet

logger = logging.getLogger(__name__)


@dataclass
class EvalRow:
    method: str
    dim: int
    mean: np.ndarray
    se: np.ndarray
    trials: int


@dataclass
class EvalTable:
    horizons: list[float]
    rows: list[EvalRow] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def header(self) -> list[str]:
        columns = ["method", "dim"]
        for k in range(len(self.horizons)):
            columns += [f"h{k}", f"h{k}_se"]
        return columns

    def row(self, method: str) -> EvalRow:
        for row in self.rows:
            if row.method == method:
                return row
        raise KeyError(method)

    def write_csv(self, path: Union[str, Path]) -> Path:
        """Write the table and its JSON sidecar (``<name>.json``)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(self.header())
            for row in self.rows:
                cells = [row.method, str(row.dim)]
                for m, s in zip(row.mean, row.se):
                    cells += [f"{m:.6e}", f"{s:.6e}"]
                writer.writerow(cells)
        sidecar = {
            "horizons_seconds": [float(h) for h in self.horizons],
            "trials": {row.method: row.trials for row in self.rows},
            **self.info,
        }
        path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True))
        return path

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> "EvalTable":
        path = Path(path)
        sidecar = json.loads(path.with_suffix(".json").read_text())
        horizons = sidecar.pop("horizons_seconds")
        trials = sidecar.pop("trials")
        table = cls(horizons, info=sidecar)
        with path.open(newline="") as handle:
            reader = csv.reader(handle)
            next(reader)
            for cells in reader:
                values = np.array([float(c) for c in cells[2:]])
                table.rows.append(EvalRow(cells[0], int(cells[1]), values[0::2], values[1::2], trials[cells[0]]))
        return table


def standard_error(samples: np.ndarray) -> np.ndarray:
    """std(ddof=1) / sqrt(n) along axis 0; zero for a single sample."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.shape[0] < 2:
        return np.zeros(samples.shape[1:])
    with np.errstate(invalid="ignore"):
        return samples.std(axis=0, ddof=1) / np.sqrt(samples.shape[0])


def trial_errors(predictor: Predictor, test_set: TrajectorySet, steps: int) -> np.ndarray:
    """Mean per-item L1-relative error at horizons 0..steps."""
    predicted = predictor.trajectory(test_set.X0, steps)
    return np.array([np.mean(per_item_l1_errors(predicted[k], test_set.truth[k])) for k in range(steps + 1)])


def multistep_eval(
    predictors: Sequence[Optional[Predictor]],
    test_set: TrajectorySet,
    method: str,
    dim: int,
    steps: Optional[int] = None,
) -> EvalRow:
    """
    One table row: per-horizon mean and standard error over trials.

    Args:
        predictors: One predictor per trial; None marks a trial whose artifact is missing
        test_set: Initial states and ground-truth trajectories
        method: Row label
        dim: Latent dimension reported in the row
        steps: Number of steps after the initial state (defaults to the test set's)

    Raises:
        MissingTrialError: A trial has no predictor
    """
    steps = test_set.truth.shape[0] - 1 if steps is None else steps
    missing = [i for i, p in enumerate(predictors) if p is None]
    if missing or not predictors:
        raise MissingTrialError(f"{method}: no artifact for trial(s) {missing or 'any'}", trials=missing)
    errors = np.stack([trial_errors(p, test_set, steps) for p in predictors])
    logger.info("%s (%dD): %s", method, dim, " ".join(f"{e:.3e}" for e in errors.mean(axis=0)))
    return EvalRow(method, dim, errors.mean(axis=0), standard_error(errors), len(predictors))
