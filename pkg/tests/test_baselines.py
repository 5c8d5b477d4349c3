import numpy as np
import pytest

from baselines import dmd, loop_gap_ratio, pca_embed, pod
from config.errors import ParameterRangeError, SolverError


def _linear_system(rng, n_steps=12):
    """Trajectory of x_{k+1} = A x_k with eigenvalues 0.9, 0.5 and 0.8 +- 0.3i."""
    block = np.zeros((4, 4))
    block[0, 0], block[1, 1] = 0.9, 0.5
    block[2:, 2:] = [[0.8, -0.3], [0.3, 0.8]]
    P = rng.standard_normal((4, 4)) + 3.0 * np.eye(4)
    A = P @ block @ np.linalg.inv(P)
    states = [rng.standard_normal(4)]
    for _ in range(n_steps):
        states.append(A @ states[-1])
    states = np.array(states)
    return A, states[:-1], states[1:]


def test_dmd_recovers_eigenvalues(rng):
    _, X, Xp = _linear_system(rng)
    rom = dmd(X, Xp, r=4, center=False)
    expected = np.sort_complex(np.array([0.9, 0.5, 0.8 + 0.3j, 0.8 - 0.3j]))
    np.testing.assert_allclose(np.sort_complex(rom.eigenvalues), expected, atol=1e-8)


def test_dmd_predicts_powers_of_the_operator(rng):
    A, X, Xp = _linear_system(rng)
    rom = dmd(X, Xp, r=4, center=False)
    x0 = rng.standard_normal((2, 4))
    predicted = rom.predict(x0, 3)
    assert predicted.shape == (3, 2, 4)
    for k in range(3):
        expected = x0 @ np.linalg.matrix_power(A, k + 1).T
        np.testing.assert_allclose(predicted[k], expected, atol=1e-8)


def test_pod_with_targets_recovers_the_operator(rng):
    A, X, Xp = _linear_system(rng)
    rom = pod(X, r=4, targets=Xp, center=False)
    np.testing.assert_allclose(rom.basis @ rom.A @ rom.basis.T, A, atol=1e-8)


def test_pod_meets_the_eckart_young_bound(rng):
    snapshots = rng.standard_normal((30, 12)) @ np.diag(np.linspace(3.0, 0.1, 12))
    rom = pod(snapshots, r=4)
    residual = np.sum((rom.reconstruct(snapshots) - snapshots) ** 2)
    s = np.linalg.svd(snapshots - snapshots.mean(axis=0), compute_uv=False)
    assert residual == pytest.approx(np.sum(s[4:] ** 2), rel=1e-8)
    np.testing.assert_allclose(rom.singular_values, s, rtol=1e-10)


def test_rank_deficient_snapshots_are_rejected(rng):
    snapshots = rng.standard_normal((10, 2)) @ rng.standard_normal((2, 5))
    with pytest.raises(SolverError):
        pod(snapshots, r=3, center=False)
    with pytest.raises(SolverError):
        dmd(snapshots, snapshots, r=3, center=False)


def test_rank_must_fit_the_data(rng):
    snapshots = rng.standard_normal((10, 5))
    with pytest.raises(ParameterRangeError):
        pod(snapshots, r=0)
    with pytest.raises(ParameterRangeError):
        dmd(snapshots, snapshots, r=6)


def test_prediction_checks_the_state_size(rng):
    rom = pod(rng.standard_normal((10, 5)), r=2)
    with pytest.raises(ParameterRangeError):
        rom.predict(np.ones((1, 4)), 2)


def test_pca_of_a_planar_loop(rng):
    theta = np.linspace(0.0, 2 * np.pi, 40, endpoint=False)
    plane = np.linalg.qr(rng.standard_normal((6, 2)))[0]
    loop = np.stack([np.cos(theta), np.sin(theta)], axis=1) @ plane.T
    embedding = pca_embed(loop, d=3)
    assert embedding.coords.shape == (40, 3)
    assert embedding.variance_captured == pytest.approx(1.0)
    assert loop_gap_ratio(embedding.coords) < 0.1
    segment = np.linspace(0.0, 1.0, 20)[:, None]
    assert loop_gap_ratio(segment) == pytest.approx(1.0)
    with pytest.raises(ParameterRangeError):
        pca_embed(loop[:2], d=3)
