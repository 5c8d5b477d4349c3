import json

import numpy as np
import pytest

from gdvae.architectures import build_architecture
from gdvae.config import ArchitectureSpec, LatentMapSpec, TrainingConfig
from manifold.descriptor import AtlasDescriptor
from pde_data.datasets import DatasetSpec, make_burgers_dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def tiny_arch():
    return ArchitectureSpec(name="custom", input_dim=16, latent_dim=2, hidden=[8],
                            activation="leaky_relu", slope=0.1, sigma_e=0.05)


@pytest.fixture
def tiny_model(tiny_arch):
    return build_architecture(tiny_arch, LatentMapSpec(kind="decay", rho=0.75), seed=3)


@pytest.fixture
def tiny_cylinder_model():
    spec = ArchitectureSpec(name="custom", input_dim=16, latent_dim=3, hidden=[8],
                            activation="leaky_relu", slope=0.1, sigma_e=0.05)
    return build_architecture(spec, LatentMapSpec(kind="translate", dt=0.1),
                              AtlasDescriptor(tag="cylinder-axis"), seed=4)


@pytest.fixture
def smooth_training():
    """Unit loss weights keep finite-difference checks well scaled."""
    return TrainingConfig(beta=1.0, gamma=0.5, decoder_variance=1.0, sigma0=1.0, sample=False,
                          batch_size=4, epochs=3, seed=9)


@pytest.fixture
def burgers_spec():
    return DatasetSpec(family="burgers-u1", m=12, n=16, seed=7)


@pytest.fixture
def burgers_pairs(burgers_spec):
    return make_burgers_dataset(burgers_spec)


@pytest.fixture
def run_document(tmp_path):
    return {
        "name": "tiny",
        "seed": 11,
        "trials": 2,
        "output_dir": str(tmp_path),
        "dataset": {"family": "burgers-u1", "m": 16, "n": 16, "seed": 5},
        "architecture": {"name": "custom", "input_dim": 16, "latent_dim": 2, "hidden": [8], "sigma_e": 0.05},
        "latent_map": {"kind": "decay", "rho": 0.75},
        "training": {"epochs": 2, "batch_size": 8},
        "baselines": [
            {"kind": "dmd", "dim": 3},
            {"kind": "pod", "dim": 3},
            {"kind": "cole-hopf", "dim": 4},
            {"kind": "oracle"},
        ],
        "eval": {"steps": 2, "n_alpha": 5},
        "analysis": {"batch": 16, "continuity_family": "periodic", "continuity_grid": 12},
    }


@pytest.fixture
def config_file(tmp_path, run_document):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(run_document))
    return path
