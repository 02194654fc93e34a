"""Prediction-interval neural networks with pluggable PI cost functions,
simulated-annealing training, and a benchmark harness."""

from .backend import BACKEND
from .baselines import empirical_quantile_pi, rolling_gaussian_pi, traditional_pi
from .bench import SweepResult, TrialStats, compare_costs, emit_plot_data, run_trials, size_sweep
from .costs import KINDS, CostSpec, evaluate
from .dataset import (
    Dataset,
    QuantileOracle,
    SynthSpec,
    TimeSeries,
    WindowSet,
    generate_synthetic,
    load_csv,
    make_windows,
    save_csv,
    split_chronological,
)
from .metrics import PiMetrics, compute_metrics
from .network import MlpModel, forward, init_weights, predict_dataset
from .trainer import AnnealConfig, TrainedModel, TrainingTrace, anneal, is_logical_pi, multi_restart

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AnnealConfig",
    "CostSpec",
    "Dataset",
    "KINDS",
    "MlpModel",
    "PiMetrics",
    "QuantileOracle",
    "SweepResult",
    "SynthSpec",
    "TimeSeries",
    "TrainedModel",
    "TrainingTrace",
    "TrialStats",
    "WindowSet",
    "anneal",
    "compare_costs",
    "compute_metrics",
    "emit_plot_data",
    "empirical_quantile_pi",
    "evaluate",
    "forward",
    "generate_synthetic",
    "init_weights",
    "is_logical_pi",
    "load_csv",
    "make_windows",
    "multi_restart",
    "predict_dataset",
    "rolling_gaussian_pi",
    "run_trials",
    "save_csv",
    "size_sweep",
    "split_chronological",
    "traditional_pi",
]
