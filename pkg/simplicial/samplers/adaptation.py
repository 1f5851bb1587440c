"""Diminishing adaptation of the edge length and the preconditioning covariance."""
from dataclasses import dataclass
from typing import Optional
import numpy as np

from ..errors import InvalidArgumentError, NotPositiveDefiniteError
from ..geometry.rotation import PreconditionRoot, spd_root


@dataclass
class AdaptationState:
    """
    Chain-local tuning state.

    `log_edge_length` is the log simplex edge length for simplicial kernels
    and the log proposal scale for RWM/MTM. The covariance part follows the
    adaptive Metropolis recursion: the running sample covariance plus
    epsilon * I is factorized every `refresh_interval` steps once
    `covariance_warmup` positions have been seen, and nothing moves after
    `freeze_after` steps.
    """
    target_acceptance: float = 0.675
    log_edge_length: float = 0.0
    step_count: int = 0
    decay_exponent: float = 0.6
    scale_adaptation_enabled: bool = True
    adaptation_enabled_for_covariance: bool = False
    running_mean: Optional[np.ndarray] = None
    running_covariance: Optional[np.ndarray] = None
    covariance_count: int = 0
    covariance_epsilon: float = 1e-6
    refresh_interval: int = 100
    covariance_warmup: int = 0
    freeze_after: Optional[int] = None
    root: Optional[PreconditionRoot] = None

    def __post_init__(self):
        if not 0.0 < self.target_acceptance < 1.0:
            raise InvalidArgumentError(f"target_acceptance must be in (0, 1), got {self.target_acceptance}")
        if not 0.5 < self.decay_exponent <= 1.0:
            raise InvalidArgumentError(f"decay_exponent must be in (0.5, 1], got {self.decay_exponent}")
        if self.covariance_epsilon <= 0:
            raise InvalidArgumentError("covariance_epsilon must be positive")
        if self.refresh_interval < 1:
            raise InvalidArgumentError("refresh_interval must be at least 1")

    @property
    def edge_length(self) -> float:
        return float(np.exp(self.log_edge_length))

    @property
    def frozen(self) -> bool:
        return self.freeze_after is not None and self.step_count > self.freeze_after

    def step_size(self) -> float:
        """Robbins-Monro gain s^(-decay_exponent)."""
        return float(max(self.step_count, 1) ** (-self.decay_exponent))

    def effective_covariance(self) -> Optional[np.ndarray]:
        if self.running_covariance is None:
            return None
        dim = self.running_covariance.shape[0]
        return self.running_covariance + self.covariance_epsilon * np.eye(dim)


def new_adaptation(
    initial_scale: float,
    target_acceptance: float,
    adapt_scale: bool = True,
    adapt_covariance: bool = False,
    dim: Optional[int] = None,
    decay_exponent: float = 0.6,
    covariance_epsilon: float = 1e-6,
    refresh_interval: int = 100,
    freeze_after: Optional[int] = None,
) -> AdaptationState:
    if initial_scale <= 0 or not np.isfinite(initial_scale):
        raise InvalidArgumentError(f"initial scale must be positive, got {initial_scale}")
    if adapt_covariance and dim is None:
        raise InvalidArgumentError("covariance adaptation needs the target dimension")
    return AdaptationState(
        target_acceptance=target_acceptance,
        log_edge_length=float(np.log(initial_scale)),
        decay_exponent=decay_exponent,
        scale_adaptation_enabled=adapt_scale,
        adaptation_enabled_for_covariance=adapt_covariance,
        covariance_epsilon=covariance_epsilon,
        refresh_interval=refresh_interval,
        covariance_warmup=2 * dim if adapt_covariance else 0,
        freeze_after=freeze_after,
    )


def adapt_edge_length(adapt: AdaptationState, accepted: bool) -> AdaptationState:
    """log(lambda) += gamma_s * (1[accepted] - target_acceptance)."""
    if not adapt.scale_adaptation_enabled:
        return adapt
    gain = adapt.step_size()
    adapt.log_edge_length += gain * ((1.0 if accepted else 0.0) - adapt.target_acceptance)
    return adapt


def adapt_covariance(adapt: AdaptationState, new_position: np.ndarray) -> AdaptationState:
    """Rank-one update of the running mean and sample covariance; periodic root refresh."""
    if not adapt.adaptation_enabled_for_covariance or adapt.frozen:
        return adapt

    x = np.asarray(new_position, dtype=float)
    if adapt.running_mean is None:
        adapt.running_mean = x.copy()
        adapt.running_covariance = np.zeros((x.size, x.size))
        adapt.covariance_count = 1
    else:
        n = adapt.covariance_count + 1
        delta = x - adapt.running_mean
        adapt.running_mean = adapt.running_mean + delta / n
        adapt.running_covariance = ((n - 2) / (n - 1)) * adapt.running_covariance + np.outer(delta, delta) / n
        adapt.covariance_count = n

    if (adapt.step_count % adapt.refresh_interval == 0
            and adapt.covariance_count >= max(adapt.covariance_warmup, 2)):
        try:
            adapt.root = spd_root(adapt.effective_covariance())
        except NotPositiveDefiniteError as e:
            print(f"⚠️  Covariance refresh skipped at step {adapt.step_count}: {e}")
    return adapt


def update_adaptation(adapt: AdaptationState, accepted: bool, position: np.ndarray) -> AdaptationState:
    """Advance the step counter and apply both adaptation schemes."""
    adapt.step_count += 1
    adapt_edge_length(adapt, accepted)
    adapt_covariance(adapt, position)
    return adapt
