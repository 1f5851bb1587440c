"""Core data types and contracts for the simplicial sampler."""
from typing import Protocol, List, Dict, Any, Optional, Union
from dataclasses import dataclass
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import InvalidArgumentError


@dataclass
class ChainState:
    """Current state of a Markov chain with its cached log-density."""
    position: np.ndarray
    log_density: float
    iteration: int = 0
    accepted: bool = False
    selected_index: int = -1


@dataclass
class ChainTrace:
    """Recorded run of one chain.

    `states` holds the initial position followed by one row per iteration,
    so it has one more row than the per-iteration lists. `elapsed_seconds[s]`
    is the wall time from the start of the loop until state s was recorded.
    """
    states: np.ndarray
    selected_index_history: List[int]
    accept_flags: List[bool]
    wall_time_seconds: float
    rng_seed: int
    algorithm: str = ""
    final_scale: Optional[float] = None
    hyper_history: Optional[np.ndarray] = None
    elapsed_seconds: Optional[np.ndarray] = None

    def __post_init__(self):
        n = len(self.accept_flags)
        if len(self.selected_index_history) != n or self.states.shape[0] != n + 1:
            raise InvalidArgumentError(
                f"inconsistent trace lengths: {self.states.shape[0]} states, "
                f"{len(self.selected_index_history)} indices, {n} flags"
            )
        if self.hyper_history is not None and self.hyper_history.shape[0] != n + 1:
            raise InvalidArgumentError("hyper_history must have one row per state")
        if self.elapsed_seconds is not None and self.elapsed_seconds.shape[0] != n + 1:
            raise InvalidArgumentError("elapsed_seconds must have one entry per state")

    @property
    def n_iterations(self) -> int:
        return len(self.accept_flags)

    @property
    def dim(self) -> int:
        return self.states.shape[1]


class TargetModel(Protocol):
    """Log-density evaluator over R^D."""

    dim: int
    descriptor: str

    def log_density(self, point: np.ndarray) -> float:
        """Return log pi(point); -inf for zero density, never NaN."""
        ...


class TransitionKernel(Protocol):
    """One Markov transition, including any chain-local adaptation."""

    name: str

    def step(self, state: ChainState, target: TargetModel, rng: np.random.Generator) -> ChainState:
        """Advance the chain by one iteration."""
        ...

    def current_scale(self) -> float:
        """Edge length (simplicial) or proposal scale (RWM/MTM) in use."""
        ...


ExtraValue = Union[int, float, str, None]


class ReplicateRecord(BaseModel):
    """Statistics for one replicate chain of one experiment cell."""

    model_config = ConfigDict(extra="forbid")

    experiment: str = Field(..., description="Experiment name")
    algorithm: str = Field(..., description="Sampler label, e.g. 'PC-Simpl'")
    dimension: int = Field(..., ge=1)
    replicate: int = Field(..., ge=0)
    seed: int
    iterations: int = Field(..., ge=0)
    mean_ess: Optional[float] = None
    min_ess: Optional[float] = None
    acceptance_rate: float = Field(..., ge=0.0, le=1.0)
    extras: Dict[str, ExtraValue] = Field(
        default_factory=dict,
        description="Experiment-specific columns appended to the CSV"
    )

    # Wall-clock values vary between identical runs; they are written to the
    # timing files, never to the result JSON or the main CSV.
    mean_esss: Optional[float] = Field(default=None, exclude=True)
    min_esss: Optional[float] = Field(default=None, exclude=True)
    wall_seconds: float = Field(default=0.0, ge=0.0, exclude=True)
    timing_extras: Dict[str, ExtraValue] = Field(default_factory=dict, exclude=True)


class AggregateRecord(BaseModel):
    """Replicate-level statistic summarized over one experiment cell."""

    model_config = ConfigDict(extra="forbid")

    algorithm: str
    dimension: int
    cell: str = Field(default="", description="Target or sweep cell label")
    statistic: str
    mean: Optional[float] = None
    median: Optional[float] = None
    standard_error: Optional[float] = None
    replicates: int = Field(..., ge=0)


class ExperimentResult(BaseModel):
    """Persisted outcome of one experiment run."""

    model_config = ConfigDict(extra="forbid")

    schema_version: int = 1
    experiment: str
    kind: str
    library_version: str
    config: Dict[str, Any] = Field(default_factory=dict, description="Config echo")
    seeds: List[int] = Field(default_factory=list)
    records: List[ReplicateRecord] = Field(default_factory=list)
    aggregates: List[AggregateRecord] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    artifacts: Dict[str, List[Dict[str, ExtraValue]]] = Field(
        default_factory=dict,
        description="Auxiliary tables written as extra CSV files"
    )
    timing_aggregates: List[AggregateRecord] = Field(default_factory=list, exclude=True)
    timing_tables: Dict[str, List[Dict[str, ExtraValue]]] = Field(default_factory=dict, exclude=True)

    @property
    def has_timings(self) -> bool:
        return bool(self.timing_aggregates)
