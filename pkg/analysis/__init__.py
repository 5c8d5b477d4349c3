"""Evaluation metrics, error tables and latent-space diagnostics."""

from analysis.metrics import l1_relative_error, per_item_l1_errors
from analysis.predictors import ColeHopfPredictor, ModelPredictor, OraclePredictor, Predictor, ROMPredictor
from analysis.tables import EvalRow, EvalTable, multistep_eval, standard_error, trial_errors
from analysis.variance import (
    VarianceStats,
    select_informative_dims,
    variance_stats,
    variance_stats_from_outputs,
    write_variance_csv,
)
from analysis.continuity import CONTINUITY_THRESHOLD, continuity_score, continuity_score_from_codes, family_encoder
from analysis.latent_export import export_latent_codes, read_latent_codes

__all__ = [
    "l1_relative_error",
    "per_item_l1_errors",
    "ColeHopfPredictor",
    "ModelPredictor",
    "OraclePredictor",
    "Predictor",
    "ROMPredictor",
    "EvalRow",
    "EvalTable",
    "multistep_eval",
    "standard_error",
    "trial_errors",
    "VarianceStats",
    "select_informative_dims",
    "variance_stats",
    "variance_stats_from_outputs",
    "write_variance_csv",
    "CONTINUITY_THRESHOLD",
    "continuity_score",
    "continuity_score_from_codes",
    "family_encoder",
    "export_latent_codes",
    "read_latent_codes",
]
