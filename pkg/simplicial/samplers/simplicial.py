"""The simplicial multiproposal kernel and its variants."""
from dataclasses import dataclass
from typing import Literal, Optional
import numpy as np
from scipy.special import logsumexp

from ..errors import ImpossibleStateError, InvalidArgumentError
from ..geometry.rotation import (
    PreconditionRoot,
    chi_square_edge_scale,
    sample_haar_frame,
    sample_haar_rotation,
)
from ..geometry.simplex import build_base_simplex, embed_simplex, map_simplex
from ..types import ChainState, TargetModel
from .adaptation import AdaptationState

SimplicialVariant = Literal["vanilla", "gaussian_scaled", "extra_dimensional", "reduced"]


@dataclass
class SimplicialConfig:
    """
    Simplicial sampler settings.

    `proposals` is P: required with P >= D for the extra-dimensional variant
    and P < D for the reduced variant, ignored otherwise. When `adaptation`
    is present its edge length (and covariance root, once available)
    override the fixed values.
    """
    edge_length: float = 1.0
    variant: SimplicialVariant = "vanilla"
    proposals: Optional[int] = None
    precondition: Optional[PreconditionRoot] = None
    adaptation: Optional[AdaptationState] = None

    def __post_init__(self):
        if not np.isfinite(self.edge_length) or self.edge_length <= 0:
            raise InvalidArgumentError(f"edge_length must be positive, got {self.edge_length}")
        if self.variant in ("extra_dimensional", "reduced") and (self.proposals is None or self.proposals < 1):
            raise InvalidArgumentError(f"variant '{self.variant}' needs a positive proposal count")

    def current_edge_length(self) -> float:
        if self.adaptation is not None:
            return self.adaptation.edge_length
        return self.edge_length

    def current_root(self) -> Optional[PreconditionRoot]:
        if self.adaptation is not None and self.adaptation.root is not None:
            return self.adaptation.root
        return self.precondition


def selection_probabilities(log_densities: np.ndarray) -> np.ndarray:
    """pi_p / sum_q pi_q from log-densities, max-shifted."""
    values = np.asarray(log_densities, dtype=float)
    values = np.where(np.isnan(values), -np.inf, values)
    if np.all(np.isneginf(values)):
        raise ImpossibleStateError("every candidate has zero density")
    return np.exp(values - logsumexp(values))


def select_index(log_densities: np.ndarray, rng: np.random.Generator) -> int:
    """Draw index p with probability proportional to exp(log_densities[p])."""
    values = np.asarray(log_densities, dtype=float)
    values = np.where(np.isnan(values), -np.inf, values)
    top = np.max(values)
    if top == -np.inf:
        raise ImpossibleStateError("every candidate has zero density")
    if top == np.inf:
        weights = (values == np.inf).astype(float)
    else:
        weights = np.exp(values - top)
    cumulative = np.cumsum(weights)
    u = rng.random() * cumulative[-1]
    return min(int(np.searchsorted(cumulative, u, side="right")), values.size - 1)


def evaluate_points(target: TargetModel, points: np.ndarray) -> np.ndarray:
    """Log-density of each row; NaN is treated as zero density."""
    many = getattr(target, "log_density_many", None)
    if many is not None:
        values = np.asarray(many(points), dtype=float)
    else:
        values = np.array([target.log_density(p) for p in points], dtype=float)
    return np.where(np.isnan(values), -np.inf, values)


def _choose(state: ChainState, candidates: np.ndarray, candidate_log_densities: np.ndarray,
            rng: np.random.Generator) -> ChainState:
    # The last candidate is the current state; its cached density is reused.
    log_densities = np.append(candidate_log_densities, state.log_density)
    index = select_index(log_densities, rng)
    stay = index == log_densities.size - 1
    return ChainState(
        position=state.position if stay else candidates[index].copy(),
        log_density=state.log_density if stay else float(log_densities[index]),
        iteration=state.iteration + 1,
        accepted=not stay,
        selected_index=index,
    )


def propose_simplex(position: np.ndarray, cfg: SimplicialConfig, rng: np.random.Generator) -> np.ndarray:
    """Rotated, scaled, preconditioned and translated vertices; last row is `position`."""
    dim = position.size
    edge_length = cfg.current_edge_length()
    if cfg.variant == "reduced":
        if cfg.proposals >= dim:
            raise InvalidArgumentError(f"reduced variant needs P < D, got P={cfg.proposals}, D={dim}")
        base = embed_simplex(build_base_simplex(cfg.proposals, edge_length), dim)
    else:
        base = build_base_simplex(dim, edge_length)

    rotation = sample_haar_rotation(dim, rng)
    scale = chi_square_edge_scale(dim, rng) if cfg.variant == "gaussian_scaled" else 1.0
    return map_simplex(base, rotation, scale=scale, root=cfg.current_root(), center=position)


def simplicial_step(state: ChainState, target: TargetModel, cfg: SimplicialConfig,
                    rng: np.random.Generator) -> ChainState:
    """
    One simplicial iteration: rotate the simplex attached to the current
    state, then move to a vertex with probability proportional to its density.
    """
    if state.position.shape != (target.dim,):
        raise InvalidArgumentError(f"state has shape {state.position.shape}, target dimension is {target.dim}")
    if cfg.variant == "extra_dimensional":
        return extra_dimensional_step(state, target, cfg, rng)

    vertices = propose_simplex(state.position, cfg, rng)
    return _choose(state, vertices, evaluate_points(target, vertices[:-1]), rng)


@dataclass
class ExtraDimensionalProposal:
    """Proposal cloud of one extra-dimensional iteration, all in target space."""
    projected: np.ndarray   # (P + 1, D); last row is the current state
    unrotated: np.ndarray   # (P + 1, D) projected vertices before rotation


def propose_extra_dimensional(position: np.ndarray, proposals: int, edge_length: float,
                              rng: np.random.Generator) -> ExtraDimensionalProposal:
    """
    Rotate a P-simplex attached to (position, 0) in R^P and project back to R^D.

    Only the first D rows of the P x P rotation reach the target space, so a
    P x D Haar frame is drawn instead of the full rotation; W Q is then the
    transpose of that frame.
    """
    dim = position.size
    if proposals < dim:
        raise InvalidArgumentError(f"extra-dimensional variant needs P >= D, got P={proposals}, D={dim}")
    base = build_base_simplex(proposals, edge_length)
    frame = sample_haar_frame(proposals, dim, rng)

    projected = base.vertices @ frame + position
    projected[-1] = position
    unrotated = base.vertices[:, :dim] + position
    return ExtraDimensionalProposal(projected=projected, unrotated=unrotated)


def extra_dimensional_step(state: ChainState, target: TargetModel, cfg: SimplicialConfig,
                           rng: np.random.Generator) -> ChainState:
    """Select among projected P-simplex vertices by target density."""
    if cfg.proposals is None or cfg.proposals < target.dim:
        raise InvalidArgumentError(f"extra-dimensional variant needs P >= D, got P={cfg.proposals}, D={target.dim}")
    proposal = propose_extra_dimensional(state.position, cfg.proposals, cfg.current_edge_length(), rng)
    candidates = proposal.projected
    return _choose(state, candidates, evaluate_points(target, candidates[:-1]), rng)
