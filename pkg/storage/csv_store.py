"""Plain CSV outputs (training histories)."""

import csv
from pathlib import Path
from typing import Union

from gdvae.training import HISTORY_COLUMNS, TrainingHistory


def write_history_csv(history: TrainingHistory, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(HISTORY_COLUMNS)
        for record in history.records:
            writer.writerow([record.epoch] + [f"{v:.9e}" for v in record.as_row()[1:]])
    return path
