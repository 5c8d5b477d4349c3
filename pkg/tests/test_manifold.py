import numpy as np
import pytest
from pydantic import ValidationError

from config.errors import ParameterRangeError
from diffcore import finite_difference_check, ops
from manifold import (
    AtlasDescriptor,
    PointCloudSeed,
    build_point_cloud,
    circle,
    clifford_torus,
    constraint_residual,
    cylinder,
    estimate_lipschitz,
    klein_bottle,
    project,
    project_analytic,
    project_batch,
    project_chart,
    projection_layer,
    torus3d,
)
from manifold.charts import klein_fold
from pde_data.datasets import klein_points

TRIALS = 20

MANIFOLDS = {
    "circle": circle,
    "clifford-torus": clifford_torus,
    "cylinder": cylinder,
    "torus3d": lambda: torus3d(2.0, 1.0),
    "klein": lambda: klein_bottle(2.0, 1.0, resolution=64),
}

DENSE_RESOLUTION = {"circle": (4000,), "clifford-torus": (240, 240), "cylinder": (600, 120),
                    "torus3d": (240, 240), "klein": (240, 240)}


def _near_point(atlas, rng, spread=0.1):
    chart = atlas.charts[0]
    u = rng.uniform(np.array(chart.lower), np.array(chart.upper))
    return chart.sigma(u) + spread * rng.standard_normal(atlas.embed_dim)


def _dense_cloud(name, atlas):
    chart = atlas.charts[0]
    grid = chart.grid(DENSE_RESOLUTION[name])
    if name == "klein":
        return klein_points(grid, 2.0, 1.0)
    return np.stack([chart.sigma(u) for u in grid])


@pytest.fixture(scope="module", params=sorted(MANIFOLDS))
def manifold_case(request):
    atlas = MANIFOLDS[request.param]()
    return request.param, atlas


def test_projection_is_idempotent_and_on_the_manifold(manifold_case, rng):
    _, atlas = manifold_case
    for _ in range(TRIALS):
        result = project(_near_point(atlas, rng), atlas)
        assert constraint_residual(result.z, atlas) < 1e-9
        again = project(result.z, atlas)
        np.testing.assert_allclose(again.z, result.z, atol=1e-9)


def test_jacobian_columns_are_tangent(manifold_case, rng):
    _, atlas = manifold_case
    for _ in range(TRIALS):
        result = project(_near_point(atlas, rng), atlas)
        _, d, _ = atlas.chart(result.chart_id).evaluate(result.u)
        tangent_projector = d @ np.linalg.solve(d.T @ d, d.T)
        normal_part = result.jacobian - tangent_projector @ result.jacobian
        assert np.max(np.abs(normal_part)) < 1e-6


def test_projection_beats_a_dense_cloud(manifold_case, rng):
    name, atlas = manifold_case
    cloud = _dense_cloud(name, atlas)
    for _ in range(TRIALS):
        w = _near_point(atlas, rng)
        best_on_cloud = np.min(np.linalg.norm(cloud - w, axis=1))
        assert np.linalg.norm(w - project(w, atlas).z) <= best_on_cloud + 1e-12


def test_projection_layer_gradient(manifold_case, rng):
    name, atlas = manifold_case
    # chart projection converges to NEWTON_TOL, so difference quotients need a larger step
    h = 1e-5 if name == "klein" else 1e-6
    for _ in range(TRIALS):
        w = _near_point(atlas, rng)[None]
        weights = rng.standard_normal(w.shape)
        error = finite_difference_check(
            lambda t: ops.sum(ops.mul(projection_layer(t, atlas), weights)), w, h=h, nudge=False
        )
        assert error < 1e-4, f"{name}: relative error {error:.3e}"


def test_circle_center_is_flagged_degenerate():
    result = project(np.zeros(2), circle())
    assert result.degenerate
    np.testing.assert_array_equal(result.jacobian, np.zeros((2, 2)))
    np.testing.assert_allclose(result.z, [1.0, 0.0])


def test_torus_axis_is_flagged_degenerate():
    assert project(np.array([0.0, 0.0, 0.5]), torus3d()).degenerate
    assert project(np.array([2.0, 0.0, 0.0]), torus3d()).degenerate


def test_batch_projection_counts_degenerate_rows():
    z, jac, degenerate = project_batch(np.array([[3.0, 4.0], [0.0, 0.0]]), circle())
    np.testing.assert_allclose(z[0], [0.6, 0.8])
    assert jac.shape == (2, 2, 2)
    assert degenerate == 1


def test_cylinder_axis_passes_through():
    result = project(np.array([0.0, 2.0, 0.7]), cylinder())
    np.testing.assert_allclose(result.z, [0.0, 1.0, 0.7])
    assert result.jacobian[2, 2] == 1.0


def test_degenerate_cylinder_point_keeps_the_axis():
    result = project(np.array([0.0, 0.0, 0.4]), cylinder())
    assert result.degenerate
    np.testing.assert_allclose(result.z, [1.0, 0.0, 0.4])
    np.testing.assert_array_equal(result.jacobian[:2, :], np.zeros((2, 3)))
    assert result.jacobian[2, 2] == 1.0


def test_klein_fold_preserves_the_embedded_point(rng):
    atlas = klein_bottle(resolution=None)
    chart = atlas.charts[0]
    for _ in range(TRIALS):
        u = rng.uniform(-10.0, 10.0, 2)
        folded = klein_fold(u)
        assert 0.0 <= folded[0] < 2 * np.pi and 0.0 <= folded[1] < 2 * np.pi
        np.testing.assert_allclose(chart.sigma(folded), chart.sigma(u), atol=1e-12)


def test_circle_projection_shrinks_near_the_manifold(rng):
    constant = estimate_lipschitz(circle(), rng, n_pairs=200, spread=0.02)
    assert 0.8 < constant < 1.2


def test_invalid_manifold_constants():
    with pytest.raises(ParameterRangeError):
        torus3d(1.0, 2.0)
    with pytest.raises(ParameterRangeError):
        klein_bottle(1.0, 1.0)
    with pytest.raises(ValidationError):
        AtlasDescriptor(tag="torus3d", R=1.0, r=2.0)


def test_descriptor_builds_matching_dimensions():
    descriptor = AtlasDescriptor(tag="cylinder-axis", n_circles=2).resolved()
    assert (descriptor.dim, descriptor.embed_dim) == (3, 5)
    klein = AtlasDescriptor(tag="klein4d", resolution=16).build()
    assert klein.point_cloud is not None and len(klein.point_cloud) == 16 * 16


# chart projection


def test_chart_projection_finds_the_torus_equator():
    atlas = torus3d(2.0, 1.0).with_point_cloud(32)
    direction = np.array([np.cos(0.3), np.sin(0.3), 0.0])
    w = 3.1 * direction
    result = project_chart(w, atlas)
    np.testing.assert_allclose(result.z, 3.0 * direction, atol=1e-9)
    np.testing.assert_allclose(result.jacobian, project_analytic(w, atlas).jacobian, atol=1e-8)


def test_chart_projection_agrees_with_the_closed_form(rng):
    atlas = torus3d(2.0, 1.0).with_point_cloud(32)
    for _ in range(TRIALS):
        w = _near_point(atlas, rng)
        chart_result, analytic = project_chart(w, atlas), project_analytic(w, atlas)
        np.testing.assert_allclose(chart_result.z, analytic.z, atol=1e-8)
        np.testing.assert_allclose(chart_result.jacobian, analytic.jacobian, atol=1e-8)


# point clouds


def test_circle_cloud_at_resolution_four():
    cloud = build_point_cloud(circle(), 4)
    assert len(cloud) == 4
    np.testing.assert_array_equal(cloud.chart_ids, np.zeros(4))
    np.testing.assert_allclose(cloud.coords[:, 0], [0.0, np.pi / 2, np.pi, 3 * np.pi / 2])
    np.testing.assert_allclose(cloud.points, [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]], atol=1e-15)


def test_doubling_the_resolution_halves_the_mesh_distance(rng):
    atlas = torus3d(2.0, 1.0)
    chart = atlas.charts[0]
    samples = [chart.sigma(u) for u in rng.uniform(0.0, 2 * np.pi, (5000, 2))]
    coarse, fine = build_point_cloud(atlas, 16), build_point_cloud(atlas, 32)
    ratio = max(fine.mesh_distance(w) for w in samples) / max(coarse.mesh_distance(w) for w in samples)
    assert 0.35 < ratio < 0.65


def test_cloud_resolution_must_be_at_least_two():
    with pytest.raises(ParameterRangeError):
        build_point_cloud(circle(), 1)


def test_cloud_csv_round_trip(tmp_path):
    cloud = build_point_cloud(torus3d(2.0, 1.0), 5)
    path = tmp_path / "cloud.csv"
    cloud.write_csv(path)
    assert path.read_text().splitlines()[0] == "k,u1,u2,z1,z2,z3"
    loaded = PointCloudSeed.read_csv(path)
    np.testing.assert_array_equal(loaded.chart_ids, cloud.chart_ids)
    np.testing.assert_array_equal(loaded.coords, cloud.coords)
    np.testing.assert_array_equal(loaded.points, cloud.points)
