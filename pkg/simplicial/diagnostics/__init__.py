"""Chain diagnostics: ESS, acceptance, jumps, misclassification and QQ data."""
from .ess import EssReport, autocovariance, effective_sample_size, ess_report
from .summaries import (
    QqResult,
    acceptance_rate,
    moved_fraction,
    nearest_mode,
    intermodal_jumps,
    misclassification_count,
    misclassification_series,
    first_iteration_below,
    qq_points,
    ks_statistic,
    ks_critical_value,
    standard_error,
)

__all__ = [
    'EssReport',
    'autocovariance',
    'effective_sample_size',
    'ess_report',
    'QqResult',
    'acceptance_rate',
    'moved_fraction',
    'nearest_mode',
    'intermodal_jumps',
    'misclassification_count',
    'misclassification_series',
    'first_iteration_below',
    'qq_points',
    'ks_statistic',
    'ks_critical_value',
    'standard_error',
]
