"""Shared plumbing for experiments: targets, kernel specs, replicate pools and aggregation."""
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, TypeVar
import numpy as np

from .. import __version__
from ..config import ExperimentConfig, SamplerConfig, TargetConfig
from ..diagnostics import acceptance_rate, ess_report, standard_error
from ..errors import InvalidArgumentError, UndefinedEssError
from ..samplers import KernelSpec
from ..targets import (
    GaussianTarget,
    MixtureTarget,
    bimodal_mixture,
    ill_conditioned_diagonal,
    ill_conditioned_full,
    spherical,
)
from ..types import AggregateRecord, ChainTrace, ExperimentResult, ReplicateRecord

T = TypeVar("T")

# Statistics aggregated for every cell, in output order.
CORE_STATISTICS = ("mean_ess", "min_ess", "acceptance_rate")
# Wall-clock statistics, aggregated only when wall time is recorded.
TIMING_STATISTICS = ("mean_esss", "min_esss", "wall_seconds")


def build_target(target: TargetConfig, dim: int, base_seed: int):
    """
    Instantiate a target at `dim`.

    The random rotation of `ill_full` is drawn from (base_seed, dim) so every
    replicate and every rerun sees the same covariance.
    """
    descriptor = f"{target.name}-{dim}d"
    if target.kind == "spherical":
        return GaussianTarget(spherical(dim), descriptor)
    if target.kind == "ill_diagonal":
        return GaussianTarget(ill_conditioned_diagonal(dim), descriptor)
    if target.kind == "ill_full":
        rng = np.random.default_rng([base_seed, dim])
        return GaussianTarget(ill_conditioned_full(dim, rng), descriptor)
    return MixtureTarget(bimodal_mixture(dim, target.separation), descriptor)


def initial_position(target) -> np.ndarray:
    """Chains start at the first mode center (the mean for Gaussian targets)."""
    return np.array(target.mode_centers()[0], dtype=float)


def kernel_spec_for(sampler: SamplerConfig, target=None, **overrides) -> KernelSpec:
    """Turn a sampler config into a KernelSpec; fixed preconditioning uses the target covariance."""
    matrix = None
    if sampler.preconditioning == "fixed":
        matrix = target.spec.covariance_matrix()
    values = dict(
        algorithm=sampler.algorithm,
        label=sampler.label,
        scale=sampler.scale,
        adapt_scale=sampler.adapt_scale,
        target_acceptance=sampler.target_acceptance,
        preconditioning=sampler.preconditioning,
        precondition_matrix=matrix,
        proposals=sampler.proposals,
        n_tries=sampler.n_tries,
        decay_exponent=sampler.decay_exponent,
        covariance_epsilon=sampler.covariance_epsilon,
        covariance_refresh=sampler.covariance_refresh,
        covariance_freeze_fraction=sampler.covariance_freeze_fraction,
    )
    values.update(overrides)
    return KernelSpec(**values)


def run_replicates(task: Callable[[int, int], T], seeds: Sequence[int], threads: int = 1) -> List[T]:
    """
    Run task(replicate, seed) for every seed and return results by replicate index.

    Replicates share nothing, so the order in which the pool finishes them
    does not affect the returned list.
    """
    if threads <= 1 or len(seeds) <= 1:
        return [task(r, seed) for r, seed in enumerate(seeds)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(task, r, seed) for r, seed in enumerate(seeds)]
        return [f.result() for f in futures]


def burn_in(samples: np.ndarray, fraction: float) -> np.ndarray:
    """Drop the leading `fraction` of rows."""
    return samples[int(fraction * samples.shape[0]):]


def safe_ess_report(samples: np.ndarray, wall_time: Optional[float], context: str):
    try:
        return ess_report(samples, wall_time)
    except (UndefinedEssError, InvalidArgumentError) as e:
        print(f"⚠️  ESS undefined for {context}: {e}")
        return None


def replicate_record(
    cfg: ExperimentConfig,
    trace: ChainTrace,
    replicate: int,
    algorithm: str,
    samples: Optional[np.ndarray] = None,
    extras: Optional[Dict] = None,
    timing_extras: Optional[Dict] = None,
) -> ReplicateRecord:
    """
    Standard per-replicate row: ESS over post-burn-in states, acceptance and timing.

    With `record_wall_time` off, wall time is written as 0 and the
    per-second fields are null.
    """
    if samples is None:
        samples = burn_in(trace.states[1:], cfg.burn_in_fraction)
    wall = trace.wall_time_seconds if cfg.record_wall_time else None
    report = safe_ess_report(samples, wall, f"{algorithm} replicate {replicate}") if samples.shape[0] else None

    return ReplicateRecord(
        experiment=cfg.name,
        algorithm=algorithm,
        dimension=trace.dim,
        replicate=replicate,
        seed=trace.rng_seed,
        iterations=trace.n_iterations,
        mean_ess=report.mean_ess if report else None,
        min_ess=report.min_ess if report else None,
        acceptance_rate=acceptance_rate(trace) if trace.n_iterations else 0.0,
        extras=extras or {},
        mean_esss=report.mean_esss if report else None,
        min_esss=report.min_esss if report else None,
        wall_seconds=wall or 0.0,
        timing_extras=timing_extras or {},
    )


def _value(record: ReplicateRecord, statistic: str):
    if statistic in record.extras:
        return record.extras[statistic]
    if statistic in record.timing_extras:
        return record.timing_extras[statistic]
    return getattr(record, statistic, None)


def aggregate_records(
    records: Sequence[ReplicateRecord],
    extra_statistics: Sequence[str] = (),
    core_statistics: Sequence[str] = CORE_STATISTICS,
) -> List[AggregateRecord]:
    """
    Mean, median and standard error per (algorithm, dimension, cell) and statistic.

    `cell` is read from extras; records without one share the empty cell.
    Missing values (None) are skipped; a statistic with no values gets nulls.
    """
    groups: "OrderedDict[tuple, List[ReplicateRecord]]" = OrderedDict()
    for record in records:
        key = (record.algorithm, record.dimension, str(record.extras.get("cell", "")))
        groups.setdefault(key, []).append(record)

    aggregates = []
    for (algorithm, dimension, cell), group in groups.items():
        for statistic in tuple(core_statistics) + tuple(extra_statistics):
            values = [_value(r, statistic) for r in group]
            values = [float(v) for v in values if isinstance(v, (int, float)) and not isinstance(v, bool)]
            values = [v for v in values if np.isfinite(v)]
            aggregates.append(AggregateRecord(
                algorithm=algorithm,
                dimension=dimension,
                cell=cell,
                statistic=statistic,
                mean=float(np.mean(values)) if values else None,
                median=float(np.median(values)) if values else None,
                standard_error=standard_error(values),
                replicates=len(values),
            ))
    return aggregates


def progress(cfg: ExperimentConfig, message: str):
    if cfg.verbose:
        print(message)


def build_result(
    cfg: ExperimentConfig,
    records: List[ReplicateRecord],
    extra_statistics: Sequence[str] = (),
    summary: Optional[Dict] = None,
    artifacts: Optional[Dict[str, List[Dict]]] = None,
    timing_statistics: Sequence[str] = (),
    timing_tables: Optional[Dict[str, List[Dict]]] = None,
) -> ExperimentResult:
    """
    Assemble the result. Wall-clock aggregates and tables are attached only
    when the config records wall time.
    """
    timing_aggregates = []
    if cfg.record_wall_time:
        timing_aggregates = aggregate_records(records, timing_statistics, core_statistics=TIMING_STATISTICS)
    return ExperimentResult(
        experiment=cfg.name,
        kind=cfg.kind,
        library_version=__version__,
        config=cfg.to_dict(),
        seeds=cfg.seeds(),
        records=records,
        aggregates=aggregate_records(records, extra_statistics),
        summary=summary or {},
        artifacts=artifacts or {},
        timing_aggregates=timing_aggregates,
        timing_tables=(timing_tables or {}) if cfg.record_wall_time else {},
    )
