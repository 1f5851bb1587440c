"""Acceptance, mode-jump, misclassification and quantile summaries of chains."""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union
import numpy as np
from scipy import stats
from scipy.spatial.distance import cdist

from ..errors import InvalidArgumentError
from ..types import ChainTrace

MIN_QQ_SAMPLES = 100


def _states_of(trace_or_states: Union[ChainTrace, np.ndarray]) -> np.ndarray:
    if isinstance(trace_or_states, ChainTrace):
        return trace_or_states.states
    states = np.asarray(trace_or_states, dtype=float)
    return states[:, None] if states.ndim == 1 else states


def acceptance_rate(trace: ChainTrace) -> float:
    """Fraction of iterations in which the chain moved."""
    if trace.n_iterations == 0:
        raise InvalidArgumentError("acceptance rate of an empty trace")
    return float(np.mean(trace.accept_flags))


def moved_fraction(states: np.ndarray) -> float:
    """Acceptance rate recomputed from consecutive-state inequality."""
    states = _states_of(states)
    if states.shape[0] < 2:
        raise InvalidArgumentError("need at least two states")
    moved = np.any(states[1:] != states[:-1], axis=1)
    return float(np.mean(moved))


def nearest_mode(states: Union[ChainTrace, np.ndarray], mode_centers: Sequence[np.ndarray]) -> np.ndarray:
    """Index of the nearest center for each state; ties go to the lower index."""
    centers = np.atleast_2d(np.asarray(mode_centers, dtype=float))
    if centers.shape[0] < 2:
        raise InvalidArgumentError("need at least two mode centers")
    # argmin returns the first minimum, which is the tie-break.
    return np.argmin(cdist(_states_of(states), centers), axis=1)


def intermodal_jumps(trace: Union[ChainTrace, np.ndarray], mode_centers: Sequence[np.ndarray]) -> int:
    """Number of consecutive-state pairs whose nearest mode differs."""
    assignment = nearest_mode(trace, mode_centers)
    return int(np.count_nonzero(np.diff(assignment)))


def misclassification_count(latent: np.ndarray, labels: np.ndarray) -> int:
    """
    Number of i with (latent_i > 0) != (label_i == 1).

    A latent of exactly zero predicts label 0.
    """
    latent = np.asarray(latent, dtype=float)
    labels = np.asarray(labels)
    if latent.shape != labels.shape:
        raise InvalidArgumentError(f"latent {latent.shape} and labels {labels.shape} differ in shape")
    return int(np.count_nonzero((latent > 0) != (labels == 1)))


def misclassification_series(states: Union[ChainTrace, np.ndarray], labels: np.ndarray) -> np.ndarray:
    """Misclassification count of every state in a trace, initial state first."""
    states = _states_of(states)
    labels = np.asarray(labels)
    if states.shape[1] != labels.size:
        raise InvalidArgumentError(f"states have {states.shape[1]} columns, labels have {labels.size} entries")
    return np.count_nonzero((states > 0) != (labels == 1)[None, :], axis=1)


def first_iteration_below(error_series: Sequence[float], threshold: float) -> Optional[int]:
    """0-based index of the first entry <= threshold, or None."""
    if threshold < 0:
        raise InvalidArgumentError(f"threshold must be non-negative, got {threshold}")
    hits = np.flatnonzero(np.asarray(error_series) <= threshold)
    return int(hits[0]) if hits.size else None


@dataclass
class QqResult:
    """Sorted samples against reference quantiles at (i - 0.5) / N."""
    empirical: np.ndarray
    theoretical: np.ndarray
    correlation: Optional[float]
    degenerate: bool = False


def qq_points(samples: np.ndarray, reference_quantile: Callable[[np.ndarray], np.ndarray]) -> QqResult:
    samples = np.asarray(samples, dtype=float).ravel()
    n = samples.size
    if n < MIN_QQ_SAMPLES:
        raise InvalidArgumentError(f"QQ pairs need at least {MIN_QQ_SAMPLES} samples, got {n}")
    probabilities = (np.arange(1, n + 1) - 0.5) / n
    empirical = np.sort(samples)
    theoretical = np.asarray(reference_quantile(probabilities), dtype=float)

    if np.ptp(empirical) == 0 or np.ptp(theoretical) == 0:
        return QqResult(empirical, theoretical, correlation=None, degenerate=True)
    correlation = float(stats.pearsonr(empirical, theoretical)[0])
    return QqResult(empirical, theoretical, correlation=correlation)


def ks_statistic(samples: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """One-sample Kolmogorov-Smirnov distance to a reference CDF."""
    return float(stats.kstest(np.asarray(samples, dtype=float).ravel(), cdf).statistic)


def ks_critical_value(n: int, alpha: float = 0.01) -> float:
    """Exact two-sided KS critical value for n samples."""
    return float(stats.kstwo.ppf(1.0 - alpha, n))


def standard_error(values: Sequence[float]) -> Optional[float]:
    """Sample standard deviation over sqrt(n); None with fewer than two finite values."""
    x = np.asarray([v for v in values if v is not None], dtype=float)
    x = x[np.isfinite(x)]
    if x.size < 2:
        return None
    return float(np.std(x, ddof=1) / np.sqrt(x.size))
