"""Latent manifolds and differentiable nearest-point projection."""

from manifold.charts import Chart, klein_bottle_chart, klein_fold, torus3d_chart
from manifold.atlas import (
    ANALYTIC_TAGS,
    TAGS,
    ManifoldAtlas,
    PointCloudSeed,
    build_point_cloud,
    circle,
    clifford_torus,
    cylinder,
    klein_bottle,
    torus3d,
)
from manifold.projection import (
    ProjectionResult,
    constraint_residual,
    estimate_lipschitz,
    project,
    project_analytic,
    project_batch,
    project_chart,
    projection_jacobian,
    projection_layer,
)
from manifold.descriptor import AtlasDescriptor

__all__ = [
    "Chart",
    "klein_bottle_chart",
    "klein_fold",
    "torus3d_chart",
    "ANALYTIC_TAGS",
    "TAGS",
    "ManifoldAtlas",
    "PointCloudSeed",
    "build_point_cloud",
    "circle",
    "clifford_torus",
    "cylinder",
    "klein_bottle",
    "torus3d",
    "ProjectionResult",
    "constraint_residual",
    "estimate_lipschitz",
    "project",
    "project_analytic",
    "project_batch",
    "project_chart",
    "projection_jacobian",
    "projection_layer",
    "AtlasDescriptor",
]
