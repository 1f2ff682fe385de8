"""Experiment configs, the trial runner and JSON/CSV reports."""

from .runner import emit_plot_data, exit_status, load_experiment_config, report_json, run, write_report
from .schemas import ExperimentConfig, RunReport, TrialRecord

__all__ = [
    "ExperimentConfig",
    "RunReport",
    "TrialRecord",
    "emit_plot_data",
    "exit_status",
    "load_experiment_config",
    "report_json",
    "run",
    "write_report",
]
