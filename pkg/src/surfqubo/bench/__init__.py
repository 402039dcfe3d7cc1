"""Experiment harness: seeded trial runs, CSV tables, fits and figures."""

from .config import ConfigError, ExperimentSpec, FitSpec, experiment_from_pairs, fit_from_pairs, parse_pairs
from .fit import FitError, binomial_se, effective_distance, fit_loglog_exponent, fit_power_law, threshold_bracket
from .runner import (
    COLUMNS,
    ResultRecord,
    bracket_from_rates,
    ground_summary,
    logical_rates,
    read_records,
    records_to_csv,
    run_ground_state_stats,
    run_records,
    run_scaling,
    run_threshold,
    scaling_exponents,
    scaling_summary,
    trial_seed,
)

__all__ = [
    "ConfigError", "ExperimentSpec", "FitSpec", "experiment_from_pairs", "fit_from_pairs", "parse_pairs",
    "FitError", "binomial_se", "effective_distance", "fit_loglog_exponent", "fit_power_law", "threshold_bracket",
    "COLUMNS", "ResultRecord", "bracket_from_rates", "ground_summary", "logical_rates", "read_records",
    "records_to_csv", "run_ground_state_stats", "run_records", "run_scaling", "run_threshold",
    "scaling_exponents", "scaling_summary", "trial_seed",
]
