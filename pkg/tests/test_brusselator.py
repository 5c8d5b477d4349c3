import numpy as np
import pytest
from scipy.integrate import solve_ivp

from analysis.metrics import l1_relative_error
from config.errors import ParameterRangeError
from pde_data import BrusselatorParams, Field2D, brusselator_ic, brusselator_solve, laplacian, reaction


def test_fixed_point_is_stationary():
    params = BrusselatorParams()
    u_star, v_star = params.fixed_point
    state = Field2D.from_channels(np.full((8, 8), u_star), np.full((8, 8), v_star))
    np.testing.assert_array_equal(reaction(state.data, params), np.zeros((2, 8, 8)))
    trajectory = brusselator_solve(state, params, 0.5, stride=0.25)
    np.testing.assert_allclose(trajectory.snapshots[-1], state.data, atol=1e-12)


def test_laplacian_of_a_plane_wave():
    lx = 16
    x = np.arange(lx)
    wave = np.broadcast_to(np.cos(2 * np.pi * x / lx), (8, lx))
    expected = (2 * np.cos(2 * np.pi / lx) - 2) * wave
    np.testing.assert_allclose(laplacian(wave, 1.0), expected, atol=1e-12)
    np.testing.assert_allclose(laplacian(np.full((4, 4), 3.0), 0.5), 0.0)


def test_initial_condition_profiles():
    field = brusselator_ic(0.3, lx=16, ly=8)
    assert field.data.shape == (2, 8, 16)
    assert field.extent == (16, 8)
    np.testing.assert_array_equal(field.u[0], field.u[5])
    np.testing.assert_array_equal(field.v[:, 0], field.v[:, 7])
    with pytest.raises(ParameterRangeError):
        brusselator_ic(1.2)


def test_explicit_and_semi_implicit_agree():
    initial = brusselator_ic(0.5, lx=16, ly=16)
    explicit = brusselator_solve(initial, BrusselatorParams(dt=1e-4), 1.0)
    semi = brusselator_solve(initial, BrusselatorParams(dt=1e-4, integrator="semi-implicit"), 1.0)
    assert l1_relative_error(semi.snapshots[-1], explicit.snapshots[-1]) < 1e-3


def test_single_cell_matches_an_ode_solver():
    params = BrusselatorParams(dt=0.01, integrator="rk4")
    initial = Field2D(np.array([1.5, 2.5]).reshape(2, 1, 1))
    trajectory = brusselator_solve(initial, params, 5.0, stride=5.0)

    def ode(_, c):
        u, v = c
        return [params.a - (1 + params.b) * u + v * u * u, params.b * u - v * u * u]

    reference = solve_ivp(ode, (0.0, 5.0), [1.5, 2.5], rtol=1e-11, atol=1e-12).y[:, -1]
    np.testing.assert_allclose(trajectory.snapshots[-1].ravel(), reference, atol=1e-4)


def test_snapshots_follow_the_stride():
    trajectory = brusselator_solve(brusselator_ic(0.5, 4, 4), BrusselatorParams(dt=0.01), 2.0, stride=1.0)
    np.testing.assert_allclose(trajectory.times, [0.0, 1.0, 2.0])
    assert trajectory.snapshots.shape == (3, 2, 4, 4)
    assert len(trajectory) == 3
    np.testing.assert_array_equal(trajectory.at(0).data, brusselator_ic(0.5, 4, 4).data)


def test_parameter_validation():
    with pytest.raises(ParameterRangeError):
        BrusselatorParams(dt=0.5)
    assert BrusselatorParams(dt=0.5, integrator="semi-implicit").dt == 0.5
    with pytest.raises(ParameterRangeError):
        BrusselatorParams(integrator="leapfrog")
    with pytest.raises(ParameterRangeError):
        brusselator_solve(brusselator_ic(0.5, 4, 4), BrusselatorParams(), 1.0, stride=0.0015)
