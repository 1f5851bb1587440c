"""Gaussian mixture targets."""
from dataclasses import dataclass
from typing import List, Optional, Tuple
import numpy as np
from scipy import optimize, stats
from scipy.special import logsumexp

from ..errors import InvalidArgumentError
from .gaussian import GaussianSpec, check_point, gaussian_log_density, spherical


@dataclass
class MixtureSpec:
    """Weighted list of Gaussian components; weights positive and summing to one."""
    components: List[Tuple[float, GaussianSpec]]

    def __post_init__(self):
        if not self.components:
            raise InvalidArgumentError("mixture needs at least one component")
        weights = np.array([w for w, _ in self.components], dtype=float)
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise InvalidArgumentError("mixture weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError(f"mixture weights sum to {weights.sum()}, not 1")
        dims = {spec.dim for _, spec in self.components}
        if len(dims) != 1:
            raise InvalidArgumentError(f"mixture components disagree on dimension: {sorted(dims)}")

    @property
    def dim(self) -> int:
        return self.components[0][1].dim

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components], dtype=float)

    @property
    def means(self) -> np.ndarray:
        return np.vstack([spec.mean for _, spec in self.components])


def mixture_log_density(spec: MixtureSpec, point: np.ndarray) -> float:
    """log sum_k w_k N_k(point), via log-sum-exp."""
    x = check_point(point, spec.dim)
    if len(spec.components) == 1:
        weight, component = spec.components[0]
        return float(np.log(weight) + gaussian_log_density(component, x))
    terms = np.array([np.log(w) + gaussian_log_density(c, x) for w, c in spec.components])
    if np.all(np.isneginf(terms)):
        return -np.inf
    return float(logsumexp(terms))


def bimodal_mixture(dim: int, separation: float = 5.0) -> MixtureSpec:
    """Equal-weight identity-covariance modes at 0 and separation * 1."""
    return MixtureSpec([
        (0.5, spherical(dim)),
        (0.5, spherical(dim, mean=np.full(dim, float(separation)))),
    ])


class MixtureTarget:
    """TargetModel backed by a MixtureSpec."""

    def __init__(self, spec: MixtureSpec, descriptor: Optional[str] = None):
        self.spec = spec
        self.dim = spec.dim
        self.descriptor = descriptor or f"mixture-{len(spec.components)}x-{spec.dim}d"
        self._marginal_sd = np.vstack([np.sqrt(c.marginal_variances()) for _, c in spec.components])

    def log_density(self, point: np.ndarray) -> float:
        return mixture_log_density(self.spec, point)

    def mode_centers(self) -> np.ndarray:
        return self.spec.means

    def marginal_cdf(self, coordinate: int, value: float) -> float:
        means = self.spec.means[:, coordinate]
        sds = self._marginal_sd[:, coordinate]
        return float(np.sum(self.spec.weights * stats.norm.cdf(value, loc=means, scale=sds)))

    def marginal_quantile(self, coordinate: int, prob: np.ndarray) -> np.ndarray:
        """Invert the marginal CDF by bracketed root finding."""
        means = self.spec.means[:, coordinate]
        sds = self._marginal_sd[:, coordinate]
        probs = np.atleast_1d(np.asarray(prob, dtype=float))
        lo = float(np.min(means - 12.0 * sds))
        hi = float(np.max(means + 12.0 * sds))
        out = np.empty_like(probs)
        for i, p in enumerate(probs):
            if p <= 0.0:
                out[i] = -np.inf
            elif p >= 1.0:
                out[i] = np.inf
            else:
                out[i] = optimize.brentq(lambda v: self.marginal_cdf(coordinate, v) - p, lo, hi, xtol=1e-12)
        return out if np.ndim(prob) else out[0]
