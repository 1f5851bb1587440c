"""Experiment harness: runs declared experiments and persists their results."""
from pathlib import Path
from typing import Optional

from ..config import ExperimentConfig
from ..types import ExperimentResult
from .extra_dimensional import run_extra_dimensional_demo
from .gaussian_studies import run_bimodal_study, run_gaussian_comparison, run_scaling_sweep
from .gp_benchmark import run_gp_benchmark
from .results import load_result, write_results
from .runner import aggregate_records, run_replicates


def run_experiment(cfg: ExperimentConfig, config_dir: Optional[Path] = None) -> ExperimentResult:
    """Dispatch on `cfg.kind`."""
    if cfg.kind == "scaling":
        return run_scaling_sweep(cfg)
    if cfg.kind == "comparison":
        return run_gaussian_comparison(cfg)
    if cfg.kind == "bimodal":
        return run_bimodal_study(cfg)
    if cfg.kind == "gp":
        return run_gp_benchmark(cfg, config_dir)
    return run_extra_dimensional_demo(cfg)


__all__ = [
    'run_experiment',
    'run_scaling_sweep',
    'run_gaussian_comparison',
    'run_bimodal_study',
    'run_gp_benchmark',
    'run_extra_dimensional_demo',
    'write_results',
    'load_result',
    'aggregate_records',
    'run_replicates',
]
