"""Declarative sampler descriptions and the transition kernels built from them."""
from dataclasses import dataclass, field
from typing import Any, Dict, Literal, Optional
import numpy as np

from ..errors import ConfigError
from ..geometry.rotation import PreconditionRoot, spd_root
from ..types import ChainState, TargetModel
from .adaptation import AdaptationState, new_adaptation, update_adaptation
from .baselines import mtm_step, rwm_step
from .simplicial import SimplicialConfig, simplicial_step

Algorithm = Literal["simpl", "g-simpl", "ed-simpl", "rwm", "mtm"]
Preconditioning = Literal["none", "fixed", "adaptive"]

ALGORITHMS = ("simpl", "g-simpl", "ed-simpl", "rwm", "mtm")
PRECONDITIONING = ("none", "fixed", "adaptive")

SIMPLICIAL_TARGET_ACCEPTANCE = 0.675
RANDOM_WALK_TARGET_ACCEPTANCE = 0.234

_LABELS = {
    ("simpl", False): "Simpl", ("simpl", True): "PC-Simpl",
    ("g-simpl", False): "G-Simpl", ("g-simpl", True): "PCG-Simpl",
    ("ed-simpl", False): "ED-Simpl", ("ed-simpl", True): "ED-Simpl",
    ("rwm", False): "RWM", ("rwm", True): "PC-RWM",
    ("mtm", False): "MTM", ("mtm", True): "PC-MTM",
}


@dataclass
class KernelSpec:
    """
    What to run, independent of the target.

    `scale` is the initial edge length for simplicial kernels (default 1)
    and the initial proposal scale for RWM/MTM (default 2.38 / sqrt(D)).
    `proposals` is P for the extra-dimensional sampler (P >= D) or for the
    fewer-proposals simplicial sampler (P < D). `n_tries` defaults to D + 1.
    """
    algorithm: Algorithm = "simpl"
    label: Optional[str] = None
    scale: Optional[float] = None
    adapt_scale: bool = True
    target_acceptance: Optional[float] = None
    preconditioning: Preconditioning = "none"
    precondition_matrix: Optional[np.ndarray] = field(default=None, repr=False)
    proposals: Optional[int] = None
    n_tries: Optional[int] = None
    decay_exponent: float = 0.6
    covariance_epsilon: float = 1e-6
    covariance_refresh: int = 100
    covariance_freeze_fraction: float = 0.5

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm '{self.algorithm}', expected one of {ALGORITHMS}")
        if self.preconditioning not in PRECONDITIONING:
            raise ConfigError(f"unknown preconditioning '{self.preconditioning}'")
        if self.preconditioning == "fixed" and self.precondition_matrix is None:
            raise ConfigError("fixed preconditioning needs precondition_matrix")
        if self.algorithm == "ed-simpl" and self.preconditioning != "none":
            raise ConfigError("the extra-dimensional sampler does not support preconditioning")
        if self.algorithm == "ed-simpl" and self.proposals is None:
            raise ConfigError("the extra-dimensional sampler needs 'proposals'")
        if self.scale is not None and self.scale <= 0:
            raise ConfigError(f"scale must be positive, got {self.scale}")
        if not 0.0 < self.covariance_freeze_fraction <= 1.0:
            raise ConfigError("covariance_freeze_fraction must be in (0, 1]")

    @property
    def is_simplicial(self) -> bool:
        return self.algorithm in ("simpl", "g-simpl", "ed-simpl")

    @property
    def display_name(self) -> str:
        if self.label:
            return self.label
        return _LABELS[(self.algorithm, self.preconditioning != "none")]

    def resolved_target_acceptance(self) -> float:
        if self.target_acceptance is not None:
            return self.target_acceptance
        return SIMPLICIAL_TARGET_ACCEPTANCE if self.is_simplicial else RANDOM_WALK_TARGET_ACCEPTANCE

    def initial_scale(self, dim: int) -> float:
        if self.scale is not None:
            return self.scale
        return 1.0 if self.is_simplicial else 2.38 / np.sqrt(dim)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "algorithm": self.algorithm,
            "label": self.display_name,
            "scale": self.scale,
            "adapt_scale": self.adapt_scale,
            "target_acceptance": self.target_acceptance,
            "preconditioning": self.preconditioning,
            "proposals": self.proposals,
            "n_tries": self.n_tries,
            "decay_exponent": self.decay_exponent,
            "covariance_epsilon": self.covariance_epsilon,
            "covariance_refresh": self.covariance_refresh,
            "covariance_freeze_fraction": self.covariance_freeze_fraction,
        }
        return data


class _AdaptiveKernel:
    """Shared bookkeeping: scale, optional fixed root, chain-local adaptation."""

    def __init__(self, spec: KernelSpec, dim: int, n_iterations: int):
        self.name = spec.display_name
        self.dim = dim
        self.fixed_root: Optional[PreconditionRoot] = (
            spd_root(spec.precondition_matrix) if spec.preconditioning == "fixed" else None
        )
        adaptive_covariance = spec.preconditioning == "adaptive"
        self.adaptation: AdaptationState = new_adaptation(
            initial_scale=spec.initial_scale(dim),
            target_acceptance=spec.resolved_target_acceptance(),
            adapt_scale=spec.adapt_scale,
            adapt_covariance=adaptive_covariance,
            dim=dim,
            decay_exponent=spec.decay_exponent,
            covariance_epsilon=spec.covariance_epsilon,
            refresh_interval=spec.covariance_refresh,
            freeze_after=int(spec.covariance_freeze_fraction * n_iterations) if adaptive_covariance else None,
        )

    def current_scale(self) -> float:
        return self.adaptation.edge_length

    def current_root(self) -> Optional[PreconditionRoot]:
        if self.adaptation.root is not None:
            return self.adaptation.root
        return self.fixed_root

    def _adapt(self, state: ChainState) -> ChainState:
        update_adaptation(self.adaptation, state.accepted, state.position)
        return state


class SimplicialKernel(_AdaptiveKernel):
    """Simpl, PC-Simpl, G-Simpl, PCG-Simpl, ED-Simpl and the fewer-proposals variant."""

    def __init__(self, spec: KernelSpec, dim: int, n_iterations: int):
        super().__init__(spec, dim, n_iterations)
        if spec.algorithm == "ed-simpl":
            variant = "extra_dimensional"
        elif spec.algorithm == "g-simpl":
            variant = "gaussian_scaled"
        elif spec.proposals is not None and spec.proposals < dim:
            variant = "reduced"
        else:
            variant = "vanilla"
        self.config = SimplicialConfig(
            edge_length=self.adaptation.edge_length,
            variant=variant,
            proposals=spec.proposals,
            precondition=self.fixed_root,
            adaptation=self.adaptation,
        )

    def step(self, state: ChainState, target: TargetModel, rng: np.random.Generator) -> ChainState:
        return self._adapt(simplicial_step(state, target, self.config, rng))


class RandomWalkKernel(_AdaptiveKernel):
    """RWM and PC-RWM (adaptive Metropolis when the covariance adapts)."""

    def step(self, state: ChainState, target: TargetModel, rng: np.random.Generator) -> ChainState:
        return self._adapt(rwm_step(state, target, self.current_scale(), self.current_root(), rng))


class MultipleTryKernel(_AdaptiveKernel):
    """MTM and PC-MTM."""

    def __init__(self, spec: KernelSpec, dim: int, n_iterations: int):
        super().__init__(spec, dim, n_iterations)
        self.n_tries = spec.n_tries if spec.n_tries is not None else dim + 1

    def step(self, state: ChainState, target: TargetModel, rng: np.random.Generator) -> ChainState:
        return self._adapt(mtm_step(state, target, self.n_tries, self.current_scale(), self.current_root(), rng))


def build_kernel(spec: KernelSpec, dim: int, n_iterations: int):
    """Fresh chain-local kernel for `spec` on a `dim`-dimensional target."""
    if spec.is_simplicial:
        return SimplicialKernel(spec, dim, n_iterations)
    if spec.algorithm == "rwm":
        return RandomWalkKernel(spec, dim, n_iterations)
    return MultipleTryKernel(spec, dim, n_iterations)
