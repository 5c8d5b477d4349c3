"""Ground-truth trajectories and training data."""

from pde_data.fields import Field1D, Field2D
from pde_data.burgers import (
    burgers_solve_fd,
    burgers_solve_spectral,
    cole_hopf_forward,
    cole_hopf_inverse,
    cole_hopf_rom,
)
from pde_data.initial_conditions import IC_FAMILIES, brusselator_ic, sample_ic, sample_ic_params
from pde_data.brusselator import BrusselatorParams, BrusselatorTrajectory, brusselator_solve, laplacian, reaction
from pde_data.datasets import (
    DatasetSpec,
    SnapshotPairSet,
    TrajectorySet,
    arm_points,
    brusselator_test_set,
    burgers_test_params,
    burgers_test_set,
    generate_dataset,
    klein_points,
    make_arm_dataset,
    make_brusselator_dataset,
    make_burgers_dataset,
    make_klein_dataset,
    make_mechanism_dataset,
)

__all__ = [
    "Field1D",
    "Field2D",
    "burgers_solve_fd",
    "burgers_solve_spectral",
    "cole_hopf_forward",
    "cole_hopf_inverse",
    "cole_hopf_rom",
    "IC_FAMILIES",
    "brusselator_ic",
    "sample_ic",
    "sample_ic_params",
    "BrusselatorParams",
    "BrusselatorTrajectory",
    "brusselator_solve",
    "laplacian",
    "reaction",
    "DatasetSpec",
    "SnapshotPairSet",
    "TrajectorySet",
    "arm_points",
    "brusselator_test_set",
    "burgers_test_params",
    "burgers_test_set",
    "generate_dataset",
    "klein_points",
    "make_arm_dataset",
    "make_brusselator_dataset",
    "make_burgers_dataset",
    "make_klein_dataset",
    "make_mechanism_dataset",
]
