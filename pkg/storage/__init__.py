"""Storage of checkpoints, ROMs, datasets and CSV outputs."""

from storage.container import (
    CHECKPOINT_MAGIC,
    DATASET_MAGIC,
    ROM_MAGIC,
    ContainerFormatError,
    file_sha256,
    read_container,
    write_container,
)
from storage.checkpoint_store import Checkpoint, CheckpointStore, load_checkpoint, save_checkpoint
from storage.rom_store import load_rom, save_rom
from storage.dataset_store import DatasetStore
from storage.csv_store import write_history_csv

__all__ = [
    "CHECKPOINT_MAGIC",
    "DATASET_MAGIC",
    "ROM_MAGIC",
    "ContainerFormatError",
    "file_sha256",
    "read_container",
    "write_container",
    "Checkpoint",
    "CheckpointStore",
    "load_checkpoint",
    "save_checkpoint",
    "load_rom",
    "save_rom",
    "DatasetStore",
    "write_history_csv",
]
