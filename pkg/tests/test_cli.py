import json
from pathlib import Path

import pytest

from analysis import EvalTable
from cli import (
    BaselineSpec,
    load_run_config,
    parse_run_config,
    read_manifest,
    splitmix64,
    trial_seed,
    trial_seeds,
    verify_manifest,
)
from cli.manifest import manifest_path
from config.errors import ConfigError, MissingArtifactError
from main import main


def _write(tmp_path, document, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document))
    return path


# seeds


def test_splitmix64_reference_values():
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert trial_seed(0, 0) == 0x6E789E6AA1B965F4
    assert trial_seed(0, 0) == splitmix64(0x9E3779B97F4A7C15)


def test_trial_seeds_are_distinct_and_stable():
    seeds = trial_seeds(11, 5)
    assert len(set(seeds)) == 5
    assert seeds == trial_seeds(11, 5)
    assert all(0 <= s < 2 ** 64 for s in seeds)


# configuration


def test_config_needs_a_seed(run_document):
    del run_document["seed"]
    with pytest.raises(ConfigError) as info:
        parse_run_config(run_document)
    assert info.value.field_path == "seed"
    assert info.value.exit_code == 2


def test_config_errors_name_the_field(run_document):
    run_document["dataset"]["m"] = 0
    with pytest.raises(ConfigError) as info:
        parse_run_config(run_document)
    assert info.value.field_path == "dataset.m"


def test_out_of_range_alpha_is_a_config_error(run_document):
    run_document["dataset"]["alpha"] = [1.5]
    with pytest.raises(ConfigError) as info:
        parse_run_config(run_document)
    assert info.value.field_path == "dataset"


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "absent.json")


def test_baseline_labels():
    assert BaselineSpec(kind="dmd", dim=3).label == "DMD-3D"
    assert BaselineSpec(kind="pod", dim=3).label == "POD-3D"
    assert BaselineSpec(kind="cole-hopf", dim=4).label == "Cole-Hopf-4D"
    assert BaselineSpec(kind="oracle").label == "Oracle"


def test_shipped_configs_parse():
    configs = sorted(Path(__file__).resolve().parent.parent.joinpath("configs").glob("*.json"))
    assert configs
    for path in configs:
        config = load_run_config(path)
        assert config.seed >= 0


# commands


def test_full_pipeline(config_file, tmp_path):
    out = str(tmp_path / "runs")
    root = tmp_path / "runs" / "tiny"
    args = ["--config", str(config_file), "--out", out, "--threads", "1"]

    assert main(["generate", *args]) == 0
    assert (root / "data" / "dataset.json").exists()
    assert verify_manifest(manifest_path(root, "generate")) == []

    assert main(["train", *args]) == 0
    for trial in (0, 1):
        lines = (root / "checkpoints" / f"trial_{trial}" / "history.csv").read_text().splitlines()
        assert len(lines) == 3
    manifest = read_manifest(manifest_path(root, "train"))
    assert manifest.status == "complete"
    assert manifest.trial_seeds == trial_seeds(11, 2)

    assert main(["eval", *args]) == 0
    table = EvalTable.read_csv(root / "eval" / "table.csv")
    assert [row.method for row in table.rows] == ["GD-VAE", "DMD-3D", "POD-3D", "Cole-Hopf-4D", "Oracle"]
    assert table.horizons == [0.0, 0.25, 0.5]
    assert table.row("GD-VAE").trials == 2
    assert table.row("Oracle").mean.tolist() == [0.0, 0.0, 0.0]
    assert (root / "roms" / "DMD-3D.gdrom").exists()

    assert main(["analyze", *args]) == 0
    analysis = root / "analysis"
    assert (analysis / "variance_trial_1.csv").exists()
    assert (analysis / "latent_trial_0.csv").exists()
    summary = json.loads((analysis / "summary.json").read_text())
    assert set(summary) == {"0", "1"}
    assert "continuity_score" in summary["0"]


def test_training_resumes_from_checkpoints(config_file, tmp_path):
    args = ["--config", str(config_file), "--out", str(tmp_path / "runs"), "--trials", "1"]
    assert main(["generate", *args]) == 0
    assert main(["train", *args]) == 0
    assert main(["train", *args, "--epochs", "3"]) == 0
    history = tmp_path / "runs" / "tiny" / "checkpoints" / "trial_0" / "history.csv"
    assert [line.split(",")[0] for line in history.read_text().splitlines()[1:]] == ["0", "1", "2"]


def test_generate_is_deterministic(config_file, tmp_path):
    for out in ("a", "b"):
        assert main(["generate", "--config", str(config_file), "--out", str(tmp_path / out)]) == 0
    first = (tmp_path / "a" / "tiny" / "data" / "dataset.gddat").read_bytes()
    second = (tmp_path / "b" / "tiny" / "data" / "dataset.gddat").read_bytes()
    assert first == second


def test_manifest_detects_tampering(config_file, tmp_path):
    assert main(["generate", "--config", str(config_file), "--out", str(tmp_path / "runs")]) == 0
    root = tmp_path / "runs" / "tiny"
    data = root / "data" / "dataset.gddat"
    raw = bytearray(data.read_bytes())
    raw[-1] ^= 0xFF
    data.write_bytes(bytes(raw))
    assert verify_manifest(manifest_path(root, "generate")) == ["data/dataset.gddat"]
    data.unlink()
    with pytest.raises(MissingArtifactError):
        verify_manifest(manifest_path(root, "generate"))


def test_exit_codes(run_document, tmp_path):
    bad_alpha = dict(run_document, dataset={**run_document["dataset"], "alpha": [1.5]})
    assert main(["generate", "--config", str(_write(tmp_path, bad_alpha, "bad.json"))]) == 2

    no_seed = {k: v for k, v in run_document.items() if k != "seed"}
    assert main(["generate", "--config", str(_write(tmp_path, no_seed, "noseed.json"))]) == 2

    assert main(["generate", "--config", str(tmp_path / "absent.json")]) == 2

    untrained = _write(tmp_path, run_document, "untrained.json")
    assert main(["eval", "--config", str(untrained), "--out", str(tmp_path / "empty")]) == 5
