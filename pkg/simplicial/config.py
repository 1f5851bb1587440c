"""Experiment configuration for the benchmark harness."""
import math
import os
import yaml
from dataclasses import dataclass, field, fields, asdict, replace
from pathlib import Path
from typing import Any, Dict, List, Optional
import numpy as np
from dotenv import load_dotenv

from .errors import ConfigError

EXPERIMENT_KINDS = ("scaling", "comparison", "bimodal", "gp", "extra_dimensional")
TARGET_KINDS = ("spherical", "ill_diagonal", "ill_full", "bimodal")

QUICK_FRACTION = 0.1
QUICK_MIN_ITERATIONS = 200
QUICK_MIN_REPLICATES = 2
QUICK_MAX_GRID_POINTS = 10

# The proposal-cloud walk starts far out in the tails of the standard normal.
CLOUD_START_COORDINATE = -6.0

# Run-time knobs that do not change what is computed; left out of the config echo.
RUNTIME_SETTINGS = ("threads", "output_dir", "verbose")


def load_dotenv_files():
    """
    Load .env files from the working directory and then the home directory.

    Existing environment variables win, and the working directory's file
    wins over the home one.
    """
    cwd_env = Path.cwd() / ".env"
    home_env = Path.home() / ".env"

    if cwd_env.exists():
        load_dotenv(cwd_env, override=False)

    if home_env.exists():
        load_dotenv(home_env, override=False)


def _build(cls, data: Optional[Dict[str, Any]], section: str):
    """Instantiate a config dataclass, naming the section of any bad key."""
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"'{section}' must be a mapping, got {type(data).__name__}")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in '{section}': {', '.join(unknown)}")
    try:
        return cls(**data)
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid '{section}': {e}") from e


@dataclass
class TargetConfig:
    """Which target to build per dimension."""
    kind: str = "spherical"   # spherical | ill_diagonal | ill_full | bimodal
    label: Optional[str] = None
    separation: float = 5.0   # bimodal only

    def __post_init__(self):
        if self.kind not in TARGET_KINDS:
            raise ConfigError(f"target.kind must be one of {TARGET_KINDS}, got '{self.kind}'")

    @property
    def name(self) -> str:
        return self.label or self.kind


@dataclass
class SamplerConfig:
    """
    One sampler of an experiment. `preconditioning: fixed` uses the target's
    true covariance; `targets` restricts the sampler to some target labels.
    """
    algorithm: str = "simpl"
    label: Optional[str] = None
    scale: Optional[float] = None
    adapt_scale: bool = True
    target_acceptance: Optional[float] = None
    preconditioning: str = "none"
    proposals: Optional[int] = None
    n_tries: Optional[int] = None
    decay_exponent: float = 0.6
    covariance_epsilon: float = 1e-6
    covariance_refresh: int = 100
    covariance_freeze_fraction: float = 0.5
    targets: Optional[List[str]] = None

    def __post_init__(self):
        if self.algorithm not in ("simpl", "g-simpl", "ed-simpl", "rwm", "mtm"):
            raise ConfigError(f"unknown sampler algorithm '{self.algorithm}'")
        if self.preconditioning not in ("none", "fixed", "adaptive"):
            raise ConfigError(f"unknown preconditioning '{self.preconditioning}'")
        if self.target_acceptance is not None and not 0.0 < self.target_acceptance < 1.0:
            raise ConfigError(f"target_acceptance must be in (0, 1), got {self.target_acceptance}")

    def runs_on(self, target: TargetConfig) -> bool:
        return self.targets is None or target.name in self.targets


@dataclass
class AcceptanceGrid:
    """`count` target acceptance rates evenly spaced from `start` to `stop`."""
    start: float = 0.2
    stop: float = 0.95
    count: int = 20

    def __post_init__(self):
        if not 0.0 < self.start <= self.stop < 1.0:
            raise ConfigError(f"acceptance grid must satisfy 0 < start <= stop < 1, got {self.start}..{self.stop}")
        if self.count < 1:
            raise ConfigError("acceptance grid count must be at least 1")

    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass
class ProposalStudyConfig:
    """Fewer-proposals sub-study: P = fraction * D at one dimension."""
    dimension: int = 64
    fractions: List[float] = field(default_factory=lambda: [0.25, 0.5, 1.0])
    target_acceptance: Optional[float] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigError("proposal_study.dimension must be positive")
        if not self.fractions or any(not 0.0 < f <= 1.0 for f in self.fractions):
            raise ConfigError("proposal_study.fractions must lie in (0, 1]")

    def proposal_counts(self) -> List[int]:
        return [max(1, int(round(f * self.dimension))) for f in self.fractions]


@dataclass
class GpConfig:
    """GP classification benchmark settings."""
    dataset: str = "data/election_2016.csv"
    eta2: float = 1.0
    xi2: float = 1.0
    rho2: float = 1.0
    sigma2: float = 0.1
    hyper_width: float = 1.0
    start_magnitude: float = 2.0
    error_threshold: int = 10

    def __post_init__(self):
        if min(self.eta2, self.xi2, self.rho2, self.sigma2) <= 0:
            raise ConfigError("gp hyperparameters must be positive")
        if self.hyper_width <= 0:
            raise ConfigError("gp.hyper_width must be positive")


@dataclass
class BimodalConfig:
    """Traceplot settings for the bimodal study."""
    trace_dimension: int = 3
    trace_points: int = 1000

    def __post_init__(self):
        if self.trace_points < 0:
            raise ConfigError("bimodal.trace_points must be non-negative")


@dataclass
class ExtraDimensionalConfig:
    """Point-cloud and QQ settings for the extra-dimensional demo."""
    cloud_dimension: int = 2
    cloud_proposals: int = 1000
    cloud_steps: int = 3
    # projected proposals spread about edge / sqrt(2 * proposals) per coordinate
    cloud_edge_length: float = 150.0
    cloud_start: Optional[List[float]] = None   # default: CLOUD_START_COORDINATE in every coordinate
    qq_dimension: int = 3
    qq_proposals: int = 100
    qq_rows: int = 500
    qq_max_samples: int = 5000

    def __post_init__(self):
        if self.cloud_proposals < self.cloud_dimension or self.qq_proposals < self.qq_dimension:
            raise ConfigError("extra_dimensional proposals must be at least the dimension")
        if self.cloud_steps < 1 or self.qq_rows < 1:
            raise ConfigError("extra_dimensional cloud_steps and qq_rows must be positive")
        if self.qq_max_samples < 100:
            raise ConfigError("extra_dimensional.qq_max_samples must be at least 100")
        if self.cloud_edge_length <= 0:
            raise ConfigError("extra_dimensional.cloud_edge_length must be positive")
        if self.cloud_start is not None and len(self.cloud_start) != self.cloud_dimension:
            raise ConfigError(
                f"extra_dimensional.cloud_start has {len(self.cloud_start)} coordinates, "
                f"cloud_dimension is {self.cloud_dimension}"
            )

    def start_position(self) -> np.ndarray:
        if self.cloud_start is None:
            return np.full(self.cloud_dimension, CLOUD_START_COORDINATE)
        return np.asarray(self.cloud_start, dtype=float)


@dataclass
class ExperimentConfig:
    name: str
    kind: str
    dimensions: List[int] = field(default_factory=lambda: [2])
    iterations: int = 10_000
    replicates: int = 10
    base_seed: int = 0
    burn_in_fraction: float = 0.2
    targets: List[TargetConfig] = field(default_factory=lambda: [TargetConfig()])
    samplers: List[SamplerConfig] = field(default_factory=lambda: [SamplerConfig()])
    acceptance_grid: Optional[AcceptanceGrid] = None
    proposal_study: Optional[ProposalStudyConfig] = None
    gp: GpConfig = field(default_factory=GpConfig)
    bimodal: BimodalConfig = field(default_factory=BimodalConfig)
    extra_dimensional: ExtraDimensionalConfig = field(default_factory=ExtraDimensionalConfig)
    record_wall_time: bool = True
    threads: int = 1
    output_dir: str = "results"
    verbose: bool = True
    description: str = ""

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"kind must be one of {EXPERIMENT_KINDS}, got '{self.kind}'")
        if not self.dimensions or any(int(d) != d or d < 1 for d in self.dimensions):
            raise ConfigError(f"dimensions must be positive integers, got {self.dimensions}")
        if self.iterations < 0:
            raise ConfigError("iterations must be non-negative")
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1")
        if not 0.0 <= self.burn_in_fraction < 1.0:
            raise ConfigError("burn_in_fraction must be in [0, 1)")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if not self.samplers:
            raise ConfigError("at least one sampler is required")
        if self.kind == "scaling" and self.acceptance_grid is None:
            raise ConfigError("scaling experiments need an 'acceptance_grid'")

    @classmethod
    def load(cls, config_path: str) -> "ExperimentConfig":
        """Load an experiment from YAML; environment variables fill threads and output_dir."""
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {config_path}")

        try:
            with open(path, "r") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Config file {config_path} is not valid YAML: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {config_path} must contain a mapping")
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        data = dict(data)
        for key in ("name", "kind"):
            if key not in data:
                raise ConfigError(f"missing required key '{key}'")

        data["targets"] = [_build(TargetConfig, t, "targets") for t in data.get("targets") or [{}]]
        data["samplers"] = [_build(SamplerConfig, s, "samplers") for s in data.get("samplers") or [{}]]
        if data.get("acceptance_grid") is not None:
            data["acceptance_grid"] = _build(AcceptanceGrid, data["acceptance_grid"], "acceptance_grid")
        if data.get("proposal_study") is not None:
            data["proposal_study"] = _build(ProposalStudyConfig, data["proposal_study"], "proposal_study")
        data["gp"] = _build(GpConfig, data.get("gp"), "gp")
        data["bimodal"] = _build(BimodalConfig, data.get("bimodal"), "bimodal")
        data["extra_dimensional"] = _build(ExtraDimensionalConfig, data.get("extra_dimensional"), "extra_dimensional")

        # Environment defaults for run-time knobs
        if "threads" not in data and os.getenv("SIMPLICIAL_THREADS"):
            try:
                data["threads"] = int(os.getenv("SIMPLICIAL_THREADS"))
            except ValueError:
                raise ConfigError(f"SIMPLICIAL_THREADS must be an integer, got '{os.getenv('SIMPLICIAL_THREADS')}'")
        if "output_dir" not in data and os.getenv("SIMPLICIAL_OUTPUT_DIR"):
            data["output_dir"] = os.getenv("SIMPLICIAL_OUTPUT_DIR")

        return _build(cls, data, "experiment")

    def quick(self) -> "ExperimentConfig":
        """Desk-scale preset: a tenth of the iterations and replicates."""
        grid = self.acceptance_grid
        if grid is not None and grid.count > QUICK_MAX_GRID_POINTS:
            grid = replace(grid, count=QUICK_MAX_GRID_POINTS)
        return replace(
            self,
            iterations=min(self.iterations, max(QUICK_MIN_ITERATIONS, int(self.iterations * QUICK_FRACTION))),
            replicates=min(self.replicates, max(QUICK_MIN_REPLICATES, math.ceil(self.replicates * QUICK_FRACTION))),
            acceptance_grid=grid,
        )

    def seeds(self) -> List[int]:
        """Replicate r runs with seed base_seed + r."""
        return [self.base_seed + r for r in range(self.replicates)]

    def to_dict(self) -> Dict[str, Any]:
        """Config echo for result files; run-time knobs are omitted so thread count never changes the output."""
        data = asdict(self)
        for key in RUNTIME_SETTINGS:
            data.pop(key)
        return data
