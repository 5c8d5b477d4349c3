"""Experiment harness."""

from cli.run_config import AnalysisSpec, BaselineSpec, EvalSpec, RunConfig, load_run_config, parse_run_config
from cli.seeds import splitmix64, trial_seed, trial_seeds
from cli.manifest import TOOL_VERSION, RunManifest, read_manifest, verify_manifest, write_manifest
from cli.commands import build_test_set, cmd_analyze, cmd_eval, cmd_generate, cmd_train

__all__ = [
    "AnalysisSpec",
    "BaselineSpec",
    "EvalSpec",
    "RunConfig",
    "load_run_config",
    "parse_run_config",
    "splitmix64",
    "trial_seed",
    "trial_seeds",
    "TOOL_VERSION",
    "RunManifest",
    "read_manifest",
    "verify_manifest",
    "write_manifest",
    "build_test_set",
    "cmd_analyze",
    "cmd_eval",
    "cmd_generate",
    "cmd_train",
]
