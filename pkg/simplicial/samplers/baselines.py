"""Random walk Metropolis and multiple-try Metropolis baselines."""
from typing import Optional
import numpy as np
from scipy.special import logsumexp

from ..errors import InvalidArgumentError
from ..geometry.rotation import PreconditionRoot
from ..types import ChainState, TargetModel
from .simplicial import evaluate_points, select_index


def _gaussian_offsets(n: int, dim: int, scale: float, root: Optional[PreconditionRoot],
                      rng: np.random.Generator) -> np.ndarray:
    offsets = scale * rng.standard_normal((n, dim))
    if root is not None:
        offsets = root.apply(offsets)
    return offsets


def rwm_step(state: ChainState, target: TargetModel, scale: float,
             root: Optional[PreconditionRoot], rng: np.random.Generator) -> ChainState:
    """
    Gaussian random walk Metropolis.

    selected_index is 0 when the proposal is taken and 1 when the chain stays.
    """
    if not np.isfinite(scale) or scale <= 0:
        raise InvalidArgumentError(f"RWM scale must be positive, got {scale}")
    proposal = state.position + _gaussian_offsets(1, target.dim, scale, root, rng)[0]
    proposal_log_density = float(evaluate_points(target, proposal[None, :])[0])

    if np.log(rng.random()) < proposal_log_density - state.log_density:
        return ChainState(proposal, proposal_log_density, state.iteration + 1, True, 0)
    return ChainState(state.position, state.log_density, state.iteration + 1, False, 1)


def mtm_step(state: ChainState, target: TargetModel, n_tries: int, scale: float,
             root: Optional[PreconditionRoot], rng: np.random.Generator) -> ChainState:
    """
    Multiple-try Metropolis with weights pi(y) and reference points.

    Draws `n_tries` symmetric Gaussian proposals, picks y among them with
    probability proportional to pi, draws n_tries - 1 reference points around
    y (the current state is the last reference) and accepts y with
    probability min(1, sum pi(proposals) / sum pi(references)). With one try
    the random stream and the acceptance law match `rwm_step` exactly.
    selected_index is the chosen try, or n_tries when the chain stays.
    """
    if n_tries < 1:
        raise InvalidArgumentError(f"n_tries must be at least 1, got {n_tries}")
    if not np.isfinite(scale) or scale <= 0:
        raise InvalidArgumentError(f"MTM scale must be positive, got {scale}")
    dim = target.dim
    stay = ChainState(state.position, state.log_density, state.iteration + 1, False, n_tries)

    proposals = state.position + _gaussian_offsets(n_tries, dim, scale, root, rng)
    weights = evaluate_points(target, proposals)
    if np.all(np.isneginf(weights)):
        rng.random()
        return stay

    chosen = select_index(weights, rng) if n_tries > 1 else 0
    candidate = proposals[chosen]

    if n_tries > 1:
        references = candidate + _gaussian_offsets(n_tries - 1, dim, scale, root, rng)
        reference_weights = np.append(evaluate_points(target, references), state.log_density)
    else:
        reference_weights = np.array([state.log_density])

    log_ratio = logsumexp(weights) - logsumexp(reference_weights)
    if np.log(rng.random()) < log_ratio:
        return ChainState(candidate.copy(), float(weights[chosen]), state.iteration + 1, True, chosen)
    return stay
