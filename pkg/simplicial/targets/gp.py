"""Gaussian process classification posterior with a logit link."""
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple
import numpy as np
from scipy import linalg, stats
from scipy.spatial.distance import pdist, squareform

from ..errors import InvalidArgumentError, NotPositiveDefiniteError
from .gaussian import check_point

_LOG_2PI = float(np.log(2.0 * np.pi))

# Log-normal(0, 3^2) prior on each hyperparameter, i.e. N(0, 3^2) on its log.
HYPER_PRIOR_LOG_SD = 3.0


@dataclass(frozen=True)
class GpHyper:
    """Kernel hyperparameters (eta^2, xi^2, rho^2, sigma^2)."""
    eta2: float
    xi2: float
    rho2: float
    sigma2: float

    NAMES = ("eta2", "xi2", "rho2", "sigma2")

    def as_vector(self) -> np.ndarray:
        return np.array([self.eta2, self.xi2, self.rho2, self.sigma2], dtype=float)

    def as_log_vector(self) -> np.ndarray:
        return np.log(self.as_vector())

    @classmethod
    def from_log_vector(cls, values: Sequence[float]) -> "GpHyper":
        return cls(*[float(v) for v in np.exp(np.asarray(values, dtype=float))])

    def with_log_value(self, index: int, log_value: float) -> "GpHyper":
        return replace(self, **{self.NAMES[index]: float(np.exp(log_value))})


def _check_hyper(hyper: GpHyper):
    values = hyper.as_vector()
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise InvalidArgumentError(f"GP hyperparameters must be positive, got {hyper}")


def _factorize_kernel(X: np.ndarray, hyper: GpHyper) -> Tuple[np.ndarray, np.ndarray]:
    _check_hyper(hyper)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InvalidArgumentError(f"predictors must be a matrix, got shape {X.shape}")
    n = X.shape[0]

    # squareform fills both triangles from one condensed vector, so K is exactly symmetric.
    sq_dist = squareform(pdist(X, "sqeuclidean")) if n > 1 else np.zeros((n, n))
    kernel = hyper.xi2 + hyper.eta2 * np.exp(-hyper.rho2 * sq_dist)
    kernel[np.diag_indices(n)] += hyper.sigma2

    try:
        chol = linalg.cholesky(kernel, lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(f"GP kernel is not positive definite: {e}") from e
    pivots = np.diag(chol)
    if not np.all(np.isfinite(chol)) or np.min(pivots) ** 2 <= n * np.finfo(float).eps * np.max(np.diag(kernel)):
        raise NotPositiveDefiniteError("GP kernel is numerically singular")
    return kernel, chol


def build_gp_kernel(X: np.ndarray, hyper: GpHyper) -> np.ndarray:
    """
    Kernel matrix k(x_i, x_j) = xi^2 + eta^2 exp(-rho^2 |x_i - x_j|^2) + sigma^2 [i == j].

    Raises NotPositiveDefiniteError when the Cholesky factorization fails.
    """
    kernel, _ = _factorize_kernel(X, hyper)
    return kernel


def _prior_log_density(theta: np.ndarray, chol: np.ndarray) -> float:
    alpha = linalg.cho_solve((chol, True), theta)
    log_det = 2.0 * float(np.sum(np.log(np.diag(chol))))
    return float(-0.5 * np.dot(theta, alpha) - 0.5 * (theta.size * _LOG_2PI + log_det))


def hyper_log_prior(hyper: GpHyper) -> float:
    """Prior density of the log-hyperparameters (independent N(0, 3^2))."""
    return float(np.sum(stats.norm.logpdf(hyper.as_log_vector(), loc=0.0, scale=HYPER_PRIOR_LOG_SD)))


class GpClassificationModel:
    """
    Bernoulli-logit GP classifier over standardized predictors.

    The kernel matrix and its Cholesky factor are cached and rebuilt by
    `set_hyper`; callers must not evaluate concurrently with a hyper update.
    """

    def __init__(self, X: np.ndarray, y: np.ndarray, hyper: GpHyper, state_codes: Optional[Sequence[str]] = None):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise InvalidArgumentError(f"predictors {X.shape} and labels {y.shape} disagree")
        if not np.all(np.isin(y, (0, 1))):
            raise InvalidArgumentError("labels must be 0 or 1")
        self.X = X
        self.y = y.astype(float)
        self.state_codes = list(state_codes) if state_codes is not None else None
        self.kernel: np.ndarray = np.empty((0, 0))
        self.chol: np.ndarray = np.empty((0, 0))
        self.hyper = hyper
        self.set_hyper(hyper)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def set_hyper(self, hyper: GpHyper):
        self.kernel, self.chol = _factorize_kernel(self.X, hyper)
        self.hyper = hyper

    def log_likelihood(self, theta: np.ndarray) -> float:
        return float(np.sum(self.y * theta - np.logaddexp(0.0, theta)))

    def prior_log_density(self, theta: np.ndarray) -> float:
        return _prior_log_density(theta, self.chol)


def gp_latent_log_density(model: GpClassificationModel, theta: np.ndarray) -> float:
    """Logit likelihood plus GP prior log N(theta; 0, K), normalizer included."""
    theta = check_point(theta, model.n)
    if not np.all(np.isfinite(theta)):
        return -np.inf
    return model.log_likelihood(theta) + model.prior_log_density(theta)


def gp_hyper_conditional(model: GpClassificationModel, hyper_candidate: GpHyper, theta: np.ndarray) -> float:
    """
    Unnormalized conditional of the hyperparameters given the latents.

    Returns log N(theta; 0, K(candidate)) + log prior(candidate) on the log
    scale; a kernel that cannot be factorized has zero density.
    """
    theta = check_point(theta, model.n)
    try:
        _, chol = _factorize_kernel(model.X, hyper_candidate)
    except InvalidArgumentError:
        return -np.inf
    value = _prior_log_density(theta, chol) + hyper_log_prior(hyper_candidate)
    return value if np.isfinite(value) else -np.inf


def hyper_log_conditional(model: GpClassificationModel, theta: np.ndarray, index: int,
                          base: Optional[GpHyper] = None) -> Callable[[float], float]:
    """
    One-dimensional conditional in the log of hyperparameter `index`.

    The other three hyperparameters are held at `base` (the model's current
    values by default).
    """
    base = model.hyper if base is None else base

    def conditional(log_value: float) -> float:
        if not np.isfinite(log_value):
            return -np.inf
        return gp_hyper_conditional(model, base.with_log_value(index, log_value), theta)

    return conditional


def misclassifying_start(labels: np.ndarray, magnitude: float = 2.0) -> np.ndarray:
    """Latent vector whose sign disagrees with every label."""
    labels = np.asarray(labels)
    return np.where(labels == 1, -magnitude, magnitude).astype(float)


class GpLatentTarget:
    """TargetModel over the latent vector of a GpClassificationModel."""

    def __init__(self, model: GpClassificationModel, descriptor: str = "gp-classification"):
        self.model = model
        self.dim = model.n
        self.descriptor = descriptor

    def log_density(self, point: np.ndarray) -> float:
        return gp_latent_log_density(self.model, point)
