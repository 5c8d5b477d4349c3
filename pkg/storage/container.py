"""Versioned binary container shared by checkpoints, ROMs and datasets.

Layout:
    magic (6 ASCII bytes, e.g. b"GDVAE1")
    header length (uint32, little-endian)
    header (UTF-8 JSON, sorted keys) with an "arrays" list of {name, shape}
    array payloads as float64 little-endian, C order, in header order
"""

import hashlib
import json
import struct
from pathlib import Path
from typing import Union

import numpy as np

from config.errors import MissingArtifactError

CHECKPOINT_MAGIC = b"GDVAE1"
ROM_MAGIC = b"GDROM1"
DATASET_MAGIC = b"GDDAT1"

_LENGTH = struct.Struct("<I")
_DTYPE = np.dtype("<f8")


class ContainerFormatError(MissingArtifactError):
    """The file is not a container of the expected kind or is truncated."""


def write_container(path: Union[str, Path], magic: bytes, header: dict, arrays: dict[str, np.ndarray]) -> Path:
    """Write arrays (real float64) and a JSON header under ``magic``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    entries, payloads = [], []
    for name, array in arrays.items():
        array = np.ascontiguousarray(np.asarray(array, dtype=_DTYPE))
        entries.append({"name": name, "shape": list(array.shape)})
        payloads.append(array.tobytes())
    body = json.dumps({**header, "arrays": entries}, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with path.open("wb") as handle:
        handle.write(magic)
        handle.write(_LENGTH.pack(len(body)))
        handle.write(body)
        for payload in payloads:
            handle.write(payload)
    return path


def read_container(path: Union[str, Path], magic: bytes) -> tuple[dict, dict[str, np.ndarray]]:
    """
    Returns:
        (header without the array table, arrays by name)

    Raises:
        MissingArtifactError: The file does not exist
        ContainerFormatError: Wrong magic or truncated payload
    """
    path = Path(path)
    if not path.exists():
        raise MissingArtifactError(f"missing artifact: {path}")
    raw = path.read_bytes()
    if raw[:len(magic)] != magic:
        raise ContainerFormatError(f"{path} is not a {magic.decode()} container")
    offset = len(magic)
    (length,) = _LENGTH.unpack_from(raw, offset)
    offset += _LENGTH.size
    header = json.loads(raw[offset:offset + length].decode("utf-8"))
    offset += length
    arrays = {}
    for entry in header.pop("arrays"):
        count = int(np.prod(entry["shape"], dtype=np.int64))
        end = offset + count * _DTYPE.itemsize
        if end > len(raw):
            raise ContainerFormatError(f"{path} is truncated in array '{entry['name']}'")
        arrays[entry["name"]] = np.frombuffer(raw[offset:end], dtype=_DTYPE).reshape(entry["shape"]).astype(np.float64)
        offset = end
    return header, arrays


def file_sha256(path: Union[str, Path]) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()
