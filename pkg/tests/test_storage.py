import json

import numpy as np
import pytest

from baselines import dmd, pod
from config.errors import MissingArtifactError, MissingTrialError
from gdvae import TrainingHistory, reconstruct, train
from gdvae.training import EpochRecord
from storage import (
    CHECKPOINT_MAGIC,
    ROM_MAGIC,
    CheckpointStore,
    ContainerFormatError,
    DatasetStore,
    file_sha256,
    load_checkpoint,
    load_rom,
    read_container,
    save_checkpoint,
    save_rom,
    write_container,
    write_history_csv,
)


# container


def test_container_keeps_header_and_arrays(tmp_path):
    arrays = {"a": np.arange(6.0).reshape(2, 3), "empty": np.zeros((0, 4))}
    path = write_container(tmp_path / "x.bin", ROM_MAGIC, {"kind": "test"}, arrays)
    header, loaded = read_container(path, ROM_MAGIC)
    assert header == {"kind": "test"}
    np.testing.assert_array_equal(loaded["a"], arrays["a"])
    assert loaded["empty"].shape == (0, 4)


def test_container_errors(tmp_path):
    with pytest.raises(MissingArtifactError):
        read_container(tmp_path / "absent.bin", ROM_MAGIC)
    path = write_container(tmp_path / "x.bin", ROM_MAGIC, {}, {"a": np.ones(8)})
    with pytest.raises(ContainerFormatError):
        read_container(path, CHECKPOINT_MAGIC)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ContainerFormatError) as info:
        read_container(path, ROM_MAGIC)
    assert info.value.exit_code == 5


# checkpoints


def test_checkpoint_restores_the_model(tiny_cylinder_model, smooth_training, burgers_pairs, tmp_path, rng):
    model, history = train(tiny_cylinder_model, burgers_pairs, smooth_training.model_copy(update={"epochs": 1}))
    path = save_checkpoint(tmp_path / "model.gdvae", model, smooth_training, history, seed=4)
    checkpoint = load_checkpoint(path)
    assert checkpoint.epoch == 0 and checkpoint.next_epoch == 1
    assert checkpoint.config == smooth_training
    assert checkpoint.model.manifold.tag == "cylinder-axis"
    for a, b in zip(model.parameters(), checkpoint.model.parameters()):
        np.testing.assert_array_equal(a.value, b.value)
        np.testing.assert_array_equal(a.m, b.m)
        assert a.step == b.step
    X = rng.standard_normal((3, 16))
    np.testing.assert_array_equal(reconstruct(model, X), reconstruct(checkpoint.model, X))


def test_checkpoint_store_lists_trials(tiny_model, smooth_training, tmp_path):
    store = CheckpointStore(tmp_path)
    history = TrainingHistory([EpochRecord(0, 1.0, 2.0, 3.0, 6.0)])
    store.save(2, tiny_model, smooth_training, history, seed=3)
    store.save(0, tiny_model, smooth_training, history, seed=3)
    assert store.trials() == [0, 2]
    assert store.path(2) == tmp_path / "trial_2" / "model.gdvae"
    assert store.load_optional(1) is None
    with pytest.raises(MissingTrialError) as info:
        store.load(1)
    assert info.value.trials == [1]
    assert store.load(0).history.totals().tolist() == [6.0]


def test_history_csv(tmp_path):
    history = TrainingHistory([EpochRecord(0, 1.0, 0.5, 0.25, 1.75), EpochRecord(1, 0.5, 0.5, 0.125, 1.125)])
    lines = write_history_csv(history, tmp_path / "history.csv").read_text().splitlines()
    assert lines[0] == "epoch,L_RE,L_KL,L_RR,total"
    assert lines[2].split(",")[0] == "1"
    assert float(lines[2].split(",")[-1]) == 1.125


# reduced-order models


def test_dmd_round_trip_keeps_complex_modes(rng, tmp_path):
    theta = 0.3
    rotation = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    X = rng.standard_normal((8, 2))
    rom = dmd(X, X @ rotation.T, r=2, center=False)
    loaded = load_rom(save_rom(tmp_path / "rom.gdrom", rom))
    assert loaded.kind == "dmd"
    np.testing.assert_array_equal(loaded.modes, rom.modes)
    np.testing.assert_array_equal(loaded.eigenvalues, rom.eigenvalues)
    np.testing.assert_allclose(loaded.predict(X[:2], 3), rom.predict(X[:2], 3))


def test_pod_round_trip(burgers_pairs, tmp_path):
    rom = pod(burgers_pairs.X, r=3, targets=burgers_pairs.x)
    rom.info["label"] = "POD-3D"
    loaded = load_rom(save_rom(tmp_path / "pod.gdrom", rom))
    assert loaded.modes is None and loaded.info == {"label": "POD-3D"}
    np.testing.assert_array_equal(loaded.predict(burgers_pairs.X[:2], 2), rom.predict(burgers_pairs.X[:2], 2))


# datasets


def test_dataset_store_round_trip(burgers_spec, burgers_pairs, tmp_path):
    store = DatasetStore(tmp_path / "data")
    assert not store.exists()
    store.save(burgers_spec, burgers_pairs)
    manifest = json.loads(store.manifest_path.read_text())
    assert manifest["pairs"] == 12
    assert manifest["sha256"] == file_sha256(store.data_path)
    spec, loaded = store.load()
    assert spec == burgers_spec
    np.testing.assert_array_equal(loaded.X, burgers_pairs.X)
    assert loaded.metadata == burgers_pairs.metadata


def test_dataset_csv_export(burgers_spec, burgers_pairs, tmp_path):
    store = DatasetStore(tmp_path / "data")
    store.save(burgers_spec, burgers_pairs)
    paths = store.export_csv(tmp_path / "csv")
    assert [p.name for p in paths[:2]] == ["pair_000000.csv", "pair_000001.csv"]
    lines = paths[1].read_text().splitlines()
    assert lines[0] == "index,X,x"
    assert len(lines) == 17
    assert float(lines[4].split(",")[2]) == burgers_pairs.x[1, 3]


def test_missing_dataset(tmp_path):
    with pytest.raises(MissingArtifactError):
        DatasetStore(tmp_path).load()
