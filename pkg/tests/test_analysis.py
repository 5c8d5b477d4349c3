import numpy as np
import pytest

from analysis import (
    ColeHopfPredictor,
    EvalTable,
    ModelPredictor,
    OraclePredictor,
    ROMPredictor,
    continuity_score,
    continuity_score_from_codes,
    export_latent_codes,
    family_encoder,
    l1_relative_error,
    multistep_eval,
    per_item_l1_errors,
    read_latent_codes,
    select_informative_dims,
    standard_error,
    variance_stats,
    variance_stats_from_outputs,
    write_variance_csv,
)
from baselines import pod
from config.errors import ExtentMismatchError, MissingTrialError, ParameterRangeError, ZeroNormError
from pde_data import burgers_test_set
from pde_data.datasets import SnapshotPairSet


@pytest.fixture
def trajectories(burgers_spec):
    return burgers_test_set(burgers_spec, n_alpha=4, steps=2)


# metrics


def test_l1_relative_error():
    assert l1_relative_error([1.0, -2.0], [1.0, -1.0]) == pytest.approx(0.5)
    with pytest.raises(ZeroNormError):
        l1_relative_error([1.0], [0.0])
    with pytest.raises(ExtentMismatchError):
        l1_relative_error(np.ones(3), np.ones(4))


def test_non_finite_predictions_score_infinity():
    errors = per_item_l1_errors(np.array([[1.0, 1.0], [np.inf, 0.0]]), np.ones((2, 2)))
    assert errors[0] == 0.0 and np.isinf(errors[1])


def test_standard_error():
    assert standard_error(np.array([[1.0, 2.0]])).tolist() == [0.0, 0.0]
    se = standard_error(np.array([1.0, 2.0, 3.0, 4.0]))
    assert se == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2.0)


# predictors and tables


def test_oracle_row_is_zero(trajectories):
    oracle = OraclePredictor(trajectories.truth)
    row = multistep_eval([oracle, oracle], trajectories, "Oracle", 0)
    assert row.mean.tolist() == [0.0, 0.0, 0.0]
    assert row.se.tolist() == [0.0, 0.0, 0.0]
    assert row.trials == 2


def test_oracle_refuses_other_initial_states(trajectories):
    with pytest.raises(ExtentMismatchError):
        OraclePredictor(trajectories.truth).trajectory(trajectories.X0 + 1.0, 1)


def test_missing_trial_is_reported(trajectories, tiny_model):
    with pytest.raises(MissingTrialError) as info:
        multistep_eval([ModelPredictor(tiny_model), None], trajectories, "GD-VAE", 2)
    assert info.value.exit_code == 5


def test_predictor_shapes(trajectories, tiny_model, burgers_pairs):
    rom = pod(burgers_pairs.X, r=3, targets=burgers_pairs.x)
    for predictor in (ModelPredictor(tiny_model), ROMPredictor(rom), ColeHopfPredictor(6, 0.02, 0.25)):
        assert predictor.trajectory(trajectories.X0, 2).shape == (3, 4, 16)
    assert ModelPredictor(tiny_model).trajectory(trajectories.X0, 0).shape == (1, 4, 16)


def test_cole_hopf_predictor_starts_from_the_truth(trajectories):
    predicted = ColeHopfPredictor(256, 0.02, 0.25).trajectory(trajectories.X0, 2)
    np.testing.assert_allclose(predicted, trajectories.truth, atol=1e-10)


def test_table_round_trips_through_csv(trajectories, tmp_path):
    oracle = OraclePredictor(trajectories.truth)
    table = EvalTable(list(trajectories.horizons), [multistep_eval([oracle], trajectories, "Oracle", 0)], {"nu": 0.02})
    path = table.write_csv(tmp_path / "eval" / "table.csv")
    assert path.read_text().splitlines()[0] == "method,dim,h0,h0_se,h1,h1_se,h2,h2_se"
    loaded = EvalTable.read_csv(path)
    assert loaded.horizons == [0.0, 0.25, 0.5]
    assert loaded.info == {"nu": 0.02}
    assert loaded.row("Oracle").trials == 1
    with pytest.raises(KeyError):
        loaded.row("DMD-3D")


# variance statistics


def test_variance_stats_from_outputs():
    mu = np.array([[1.0, 0.0], [3.0, 0.0]])
    var = np.array([[0.5, 1.0], [1.5, 1.0]])
    stats = variance_stats_from_outputs(mu, var)
    assert stats.q_vom.tolist() == [1.0, 0.0]
    assert stats.q_mov.tolist() == [1.0, 1.0]
    assert stats.ratio.tolist() == [1.0, 0.0]


def test_informative_dims_stand_out():
    rng = np.random.default_rng(0)
    mu = 0.01 * rng.standard_normal((64, 6))
    mu[:, 1] = np.cos(np.linspace(0, 2 * np.pi, 64))
    mu[:, 4] = 0.8 * np.sin(np.linspace(0, 2 * np.pi, 64))
    var = np.full((64, 6), 0.5)
    var[:, [1, 4]] = 1e-3
    selected = select_informative_dims(variance_stats_from_outputs(mu, var))
    assert selected == [1, 4]


def test_identical_dims_select_nothing():
    mu = np.tile(np.linspace(-1, 1, 8)[:, None], (1, 4))
    stats = variance_stats_from_outputs(mu, np.full((8, 4), 0.1))
    assert select_informative_dims(stats) == []


def test_variance_csv(tmp_path, rng):
    stats = variance_stats_from_outputs(rng.standard_normal((5, 3)), np.full((5, 3), 0.2))
    path = write_variance_csv(stats, tmp_path / "variance.csv", selected=[2])
    lines = path.read_text().splitlines()
    assert lines[0] == "dim,q_mov,q_vom,ratio,selected"
    assert [line.split(",")[-1] for line in lines[1:]] == ["0", "0", "1"]


def test_variance_stats_of_a_model(tiny_model, rng):
    stats = variance_stats(tiny_model, rng.standard_normal((10, 16)))
    np.testing.assert_allclose(stats.q_mov, 0.05 ** 2)
    assert stats.n_batch == 10


# continuity


def test_closed_loop_scores_low_and_torn_loop_high():
    theta = np.linspace(0.0, 2 * np.pi, 50, endpoint=False)
    loop = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    assert continuity_score_from_codes(loop) == pytest.approx(1.0)
    torn = theta[:, None]
    assert continuity_score_from_codes(torn) > 10.0


def test_continuity_needs_three_points():
    with pytest.raises(ParameterRangeError):
        continuity_score(lambda a: a[:, None], np.array([0.0, 0.5]))


def test_family_encoder_feeds_the_model(tiny_model):
    alphas = np.arange(12) / 12
    codes = family_encoder(tiny_model, "periodic", n=16)(alphas)
    assert codes.shape == (12, 2)
    assert np.isfinite(continuity_score(family_encoder(tiny_model, "periodic", n=16), alphas))


# latent export


def test_latent_codes_export(tiny_model, burgers_pairs, tmp_path):
    path = export_latent_codes(tiny_model, burgers_pairs, tmp_path / "latent.csv", batch_size=5)
    header, rows = read_latent_codes(path)
    assert header == ["alpha", "t", "z1", "z2"]
    assert rows.shape == (12, 4)
    assert rows[3, 0] == burgers_pairs.metadata[3]["params"][0]
    assert rows[3, 1] == burgers_pairs.metadata[3]["t"]


def test_two_parameter_latent_header(tiny_model, rng, tmp_path):
    X = rng.standard_normal((3, 16))
    metadata = [{"params": [0.1 * i, 0.5], "t": 0.25} for i in range(3)]
    path = export_latent_codes(tiny_model, SnapshotPairSet(X, X.copy(), metadata), tmp_path / "latent.csv")
    header, rows = read_latent_codes(path)
    assert header == ["alpha", "alpha2", "t", "z1", "z2"]
    assert rows[2, :3].tolist() == [0.2, 0.5, 0.25]
