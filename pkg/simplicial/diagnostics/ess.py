"""Effective sample size from FFT autocovariances."""
from dataclasses import dataclass
from typing import Optional
import numpy as np

from ..errors import InvalidArgumentError, UndefinedEssError

MIN_SERIES_LENGTH = 10


def autocovariance(series: np.ndarray) -> np.ndarray:
    """
    Biased autocovariance gamma_k = (1/N) sum_t (x_t - m)(x_{t+k} - m), k = 0..N-1.

    Computed through a zero-padded FFT so long chains stay O(N log N).
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise InvalidArgumentError(f"series must be one-dimensional, got shape {x.shape}")
    n = x.size
    centered = x - np.mean(x)
    size = 1 << (2 * n - 1).bit_length()
    spectrum = np.fft.rfft(centered, n=size)
    acov = np.fft.irfft(spectrum * np.conj(spectrum), n=size)[:n]
    return acov / n


def effective_sample_size(series: np.ndarray) -> float:
    """
    Geyer initial monotone sequence estimate of the effective sample size.

    Sums of adjacent autocovariance pairs are used while they stay positive,
    forced to be non-increasing, and N * gamma_0 / (2 * sum - gamma_0) is
    clamped to (0, N].

    Raises:
        InvalidArgumentError: fewer than 10 values or non-finite values
        UndefinedEssError: the series is constant
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < MIN_SERIES_LENGTH:
        raise InvalidArgumentError(f"ESS needs a series of at least {MIN_SERIES_LENGTH} values, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("ESS series has non-finite values")
    if np.ptp(x) == 0:
        raise UndefinedEssError("ESS is undefined for a constant series")

    n = x.size
    acov = autocovariance(x)
    if acov[0] <= 0:
        raise UndefinedEssError("ESS is undefined for a series with zero variance")

    n_pairs = n // 2
    pair_sums = acov[0:2 * n_pairs:2] + acov[1:2 * n_pairs:2]
    non_positive = np.flatnonzero(pair_sums <= 0)
    if non_positive.size:
        pair_sums = pair_sums[:non_positive[0]]
    pair_sums = np.minimum.accumulate(pair_sums)

    tau_times_gamma0 = 2.0 * np.sum(pair_sums) - acov[0]
    if tau_times_gamma0 <= 0:
        return float(n)
    ess = n * acov[0] / tau_times_gamma0
    return float(min(max(ess, np.finfo(float).tiny), n))


@dataclass
class EssReport:
    """Per-coordinate ESS of a chain with its mean, minimum and per-second rates."""
    per_coordinate_ess: np.ndarray
    mean_ess: float
    min_ess: float
    wall_time_seconds: Optional[float] = None

    @property
    def mean_esss(self) -> Optional[float]:
        if not self.wall_time_seconds:
            return None
        return self.mean_ess / self.wall_time_seconds

    @property
    def min_esss(self) -> Optional[float]:
        if not self.wall_time_seconds:
            return None
        return self.min_ess / self.wall_time_seconds


def ess_report(samples: np.ndarray, wall_time_seconds: Optional[float] = None) -> EssReport:
    """ESS of every column of an (N, D) sample matrix."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    if samples.ndim != 2:
        raise InvalidArgumentError(f"samples must be (N, D), got shape {samples.shape}")
    per_coordinate = np.array([effective_sample_size(samples[:, j]) for j in range(samples.shape[1])])
    if wall_time_seconds is not None and wall_time_seconds <= 0:
        wall_time_seconds = None
    return EssReport(
        per_coordinate_ess=per_coordinate,
        mean_ess=float(np.mean(per_coordinate)),
        min_ess=float(np.min(per_coordinate)),
        wall_time_seconds=wall_time_seconds,
    )
