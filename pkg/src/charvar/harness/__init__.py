"""Experiment configuration, verification suites, reports and plots."""
from .config import ExperimentConfig, default_loops, default_matrix, load_config
from .verify import SUITES, RunReport, run_sample, run_verify

__all__ = ["ExperimentConfig", "RunReport", "SUITES", "default_loops", "default_matrix",
           "load_config", "run_sample", "run_verify"]
