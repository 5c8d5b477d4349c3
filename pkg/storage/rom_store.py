"""Linear ROMs in the shared binary container."""

from pathlib import Path
from typing import Union

import numpy as np

from baselines.linear_rom import LinearROM
from storage.container import ROM_MAGIC, read_container, write_container


def save_rom(path: Union[str, Path], rom: LinearROM) -> Path:
    arrays = {
        "mean": rom.mean,
        "basis": rom.basis,
        "A.real": np.real(rom.A),
        "A.imag": np.imag(rom.A),
        "eigenvalues.real": np.real(rom.eigenvalues),
        "eigenvalues.imag": np.imag(rom.eigenvalues),
        "singular_values": rom.singular_values,
    }
    if rom.modes is not None:
        arrays["modes.real"] = np.real(rom.modes)
        arrays["modes.imag"] = np.imag(rom.modes)
    header = {"kind": rom.kind, "centered": rom.centered, "rank": rom.rank, "info": rom.info}
    return write_container(path, ROM_MAGIC, header, arrays)


def _complex(arrays: dict, name: str) -> np.ndarray:
    value = arrays[f"{name}.real"] + 1j * arrays[f"{name}.imag"]
    return value if np.any(arrays[f"{name}.imag"]) else arrays[f"{name}.real"]


def load_rom(path: Union[str, Path]) -> LinearROM:
    header, arrays = read_container(path, ROM_MAGIC)
    modes = arrays["modes.real"] + 1j * arrays["modes.imag"] if "modes.real" in arrays else None
    return LinearROM(
        kind=header["kind"],
        mean=arrays["mean"],
        basis=arrays["basis"],
        A=_complex(arrays, "A"),
        eigenvalues=arrays["eigenvalues.real"] + 1j * arrays["eigenvalues.imag"],
        singular_values=arrays["singular_values"],
        modes=modes,
        centered=header["centered"],
        info=header.get("info", {}),
    )
