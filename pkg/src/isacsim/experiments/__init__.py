from .config import (ExperimentConfig, load_config, METHODS, CDF_PRESET, SWEEP_M, SWEEP_KAPPA_T,
                     SWEEP_KAPPA_R)
from .runner import (TrialRow, SweepPoint, CdfPoint, draw_trial, run_trial, run_trials, run_scnr_cdf,
                     run_se_sweep, scnr_cdf, summarize_sweep)
from .validation import Check, run_validation, random_instance
from .csvio import to_csv, write_csv, read_csv

__all__ = [
    "ExperimentConfig", "load_config", "METHODS", "CDF_PRESET", "SWEEP_M", "SWEEP_KAPPA_T",
    "SWEEP_KAPPA_R",
    "TrialRow", "SweepPoint", "CdfPoint", "draw_trial", "run_trial", "run_trials", "run_scnr_cdf",
    "run_se_sweep", "scnr_cdf", "summarize_sweep",
    "Check", "run_validation", "random_instance",
    "to_csv", "write_csv", "read_csv",
]
