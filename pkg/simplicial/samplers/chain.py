"""Chain driver: runs a kernel for a fixed number of iterations."""
import time
from typing import List, Optional
import numpy as np

from ..errors import InvalidArgumentError, InvalidStartError
from ..targets.gp import GpLatentTarget, hyper_log_conditional
from ..types import ChainState, ChainTrace, TargetModel
from .kernels import KernelSpec, build_kernel
from .simplicial import evaluate_points
from .slice import slice_step_univariate


def _hyper_sweep(target: GpLatentTarget, theta: np.ndarray, width: float, rng: np.random.Generator):
    """Slice-update each log-hyperparameter in turn, then refactorize the kernel once."""
    model = target.model
    hyper = model.hyper
    for index in range(len(hyper.NAMES)):
        conditional = hyper_log_conditional(model, theta, index, base=hyper)
        log_value = slice_step_univariate(hyper.as_log_vector()[index], conditional, width, rng)
        hyper = hyper.with_log_value(index, log_value)
    model.set_hyper(hyper)


def run_chain(
    spec: KernelSpec,
    target: TargetModel,
    n_iterations: int,
    initial: np.ndarray,
    seed: int,
    hyper_width: float = 1.0,
) -> ChainTrace:
    """
    Run one chain from `initial` with a fresh kernel and rng stream.

    For a GP latent target each sweep is one multiproposal update of the
    latents followed by a slice pass over the four log-hyperparameters; the
    cached log-density is recomputed after the kernel changes. The trace is
    bitwise reproducible from `seed`, wall time aside.
    """
    if n_iterations < 0:
        raise InvalidArgumentError(f"n_iterations must be non-negative, got {n_iterations}")
    position = np.asarray(initial, dtype=float).copy()
    if position.shape != (target.dim,):
        raise InvalidArgumentError(f"initial position has shape {position.shape}, target dimension is {target.dim}")
    log_density = float(evaluate_points(target, position[None, :])[0])
    if not np.isfinite(log_density):
        raise InvalidStartError(f"initial position has log-density {log_density}")

    rng = np.random.default_rng(seed)
    kernel = build_kernel(spec, target.dim, n_iterations)
    is_gp = isinstance(target, GpLatentTarget)

    states = np.empty((n_iterations + 1, target.dim))
    states[0] = position
    hypers: Optional[np.ndarray] = None
    if is_gp:
        hypers = np.empty((n_iterations + 1, 4))
        hypers[0] = target.model.hyper.as_vector()
    indices: List[int] = []
    flags: List[bool] = []

    state = ChainState(position=position, log_density=log_density)
    elapsed = np.zeros(n_iterations + 1)
    started = time.perf_counter()
    for s in range(1, n_iterations + 1):
        state = kernel.step(state, target, rng)
        indices.append(int(state.selected_index))
        flags.append(bool(state.accepted))
        if is_gp:
            _hyper_sweep(target, state.position, hyper_width, rng)
            state.log_density = float(evaluate_points(target, state.position[None, :])[0])
            hypers[s] = target.model.hyper.as_vector()
        states[s] = state.position
        elapsed[s] = time.perf_counter() - started

    return ChainTrace(
        states=states,
        selected_index_history=indices,
        accept_flags=flags,
        wall_time_seconds=float(elapsed[-1]),
        rng_seed=seed,
        algorithm=kernel.name,
        final_scale=kernel.current_scale(),
        hyper_history=hypers,
        elapsed_seconds=elapsed,
    )
