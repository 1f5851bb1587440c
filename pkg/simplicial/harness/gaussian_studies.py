"""Scaling sweep, Gaussian comparison and bimodal jump study."""
from collections import defaultdict
from typing import Dict, List, Optional, Tuple
import numpy as np

from ..config import ExperimentConfig, SamplerConfig
from ..diagnostics import intermodal_jumps, standard_error
from ..errors import ConfigError
from ..samplers import KernelSpec, run_chain
from ..types import ChainTrace, ExperimentResult, ReplicateRecord
from .runner import (
    build_result,
    build_target,
    initial_position,
    kernel_spec_for,
    progress,
    replicate_record,
    run_replicates,
)

# The sweep reports the best acceptance for each of these, in this order.
ARGMAX_STATISTICS = ("mean_ess", "min_ess")


def _run_cell_traced(cfg: ExperimentConfig, spec: KernelSpec, target, extras: Dict,
                     count_jumps: bool = False,
                     keep_first_trace: bool = False) -> Tuple[List[ReplicateRecord], Optional[ChainTrace]]:
    """All replicates of one (sampler, target, setting) cell, optionally with replicate 0's trace."""
    start = initial_position(target)

    def task(replicate: int, seed: int):
        trace = run_chain(spec, target, cfg.iterations, start, seed)
        cell_extras = dict(extras)
        cell_extras["edge_length" if spec.is_simplicial else "proposal_scale"] = float(trace.final_scale)
        if count_jumps:
            cell_extras["jumps"] = intermodal_jumps(trace, target.mode_centers())
        record = replicate_record(cfg, trace, replicate, spec.display_name, extras=cell_extras)
        return record, (trace if keep_first_trace and replicate == 0 else None)

    outcomes = run_replicates(task, cfg.seeds(), cfg.threads)
    return [record for record, _ in outcomes], outcomes[0][1]


def _run_cell(cfg: ExperimentConfig, spec: KernelSpec, target, extras: Dict,
              count_jumps: bool = False) -> List[ReplicateRecord]:
    return _run_cell_traced(cfg, spec, target, extras, count_jumps)[0]


def _mean_of(records: List[ReplicateRecord], key: str) -> Optional[float]:
    values = [getattr(r, key, None) if key not in r.extras else r.extras[key] for r in records]
    values = [float(v) for v in values if v is not None]
    return float(np.mean(values)) if values else None


def run_scaling_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Optimal-scaling sweep: every simplicial sampler, at every dimension, adapts
    its edge length toward each target acceptance rate of the grid.

    Emits, per (target, sampler, dimension), two argmax rows: the target
    acceptance whose replicate-averaged mean ESS is largest and the one whose
    minimum ESS is largest, each with the realized acceptance and adapted
    edge length there. An optional proposal study reruns plain Simpl at one
    dimension with P < D proposals.
    """
    if cfg.acceptance_grid is None:
        raise ConfigError("scaling experiments need an 'acceptance_grid'")
    grid = cfg.acceptance_grid.values()
    records: List[ReplicateRecord] = []
    argmax_rows = []

    for target_cfg in cfg.targets:
        for dim in cfg.dimensions:
            target = build_target(target_cfg, dim, cfg.base_seed)
            for sampler in cfg.samplers:
                if not sampler.runs_on(target_cfg):
                    continue
                cells = []
                for acceptance in grid:
                    spec = kernel_spec_for(sampler, target, target_acceptance=acceptance)
                    progress(cfg, f"📐 {spec.display_name} on {target.descriptor}: target acceptance {acceptance:.3f}")
                    cell_records = _run_cell(cfg, spec, target, {
                        "cell": f"{target_cfg.name}@{acceptance:.4f}",
                        "target": target_cfg.name,
                        "target_acceptance": acceptance,
                    })
                    records.extend(cell_records)
                    cells.append((acceptance, spec, cell_records))

                argmax_rows.extend(_argmax_rows(target_cfg.name, dim, cells))

    artifacts = {"argmax": argmax_rows}
    summary = {"argmax": argmax_rows}

    if cfg.proposal_study is not None:
        study_records, study_rows = _run_proposal_study(cfg)
        records.extend(study_records)
        artifacts["proposal_study"] = study_rows
        summary["proposal_study"] = study_rows

    return build_result(cfg, records, ("target_acceptance", "edge_length"), summary, artifacts)


def _argmax_rows(target: str, dim: int, cells) -> List[Dict]:
    """Best grid cell by replicate-averaged mean ESS and by minimum ESS."""
    rows = []
    for statistic in ARGMAX_STATISTICS:
        scored = [(_mean_of(rs, statistic), a, spec, rs) for a, spec, rs in cells]
        scored = [s for s in scored if s[0] is not None]
        if not scored:
            continue
        # ties keep the lowest acceptance
        _, best_acceptance, spec, best = max(scored, key=lambda s: s[0])
        scale_key = "edge_length" if spec.is_simplicial else "proposal_scale"
        rows.append({
            "target": target,
            "algorithm": spec.display_name,
            "dimension": dim,
            "maximized": statistic,
            "best_target_acceptance": best_acceptance,
            "realized_acceptance": _mean_of(best, "acceptance_rate"),
            "edge_length": _mean_of(best, scale_key),
            "mean_ess": _mean_of(best, "mean_ess"),
            "min_ess": _mean_of(best, "min_ess"),
        })
    return rows


def _run_proposal_study(cfg: ExperimentConfig):
    study = cfg.proposal_study
    dim = study.dimension
    sampler = next((s for s in cfg.samplers if s.algorithm == "simpl" and s.preconditioning == "none"),
                   SamplerConfig())
    target_cfg = cfg.targets[0]
    target = build_target(target_cfg, dim, cfg.base_seed)

    records, rows = [], []
    for proposals in study.proposal_counts():
        label = f"Simpl(P={proposals})"
        overrides = {"label": label, "proposals": proposals if proposals < dim else None}
        if study.target_acceptance is not None:
            overrides["target_acceptance"] = study.target_acceptance
        spec = kernel_spec_for(sampler, target, **overrides)
        progress(cfg, f"📐 {label} on {target.descriptor}")
        cell_records = _run_cell(cfg, spec, target, {"cell": f"P={proposals}", "proposals": proposals})
        records.extend(cell_records)
        mean_ess = [r.mean_ess for r in cell_records if r.mean_ess is not None]
        rows.append({
            "dimension": dim,
            "proposals": proposals,
            "mean_ess": float(np.mean(mean_ess)) if mean_ess else None,
            "mean_ess_standard_error": standard_error(mean_ess),
            "acceptance_rate": _mean_of(cell_records, "acceptance_rate"),
        })
    return records, rows


def run_gaussian_comparison(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Run every sampler on every (target, dimension) it applies to and compare
    each simplicial sampler against each baseline, replicate by replicate.

    ESS ratios go to the `relative` artifact; ESS-per-second ratios are
    wall-clock values and go to the `relative` timing table.
    """
    records: List[ReplicateRecord] = []
    relative_rows, speed_rows = [], []

    for target_cfg in cfg.targets:
        for dim in cfg.dimensions:
            target = build_target(target_cfg, dim, cfg.base_seed)
            by_sampler: Dict[str, List[ReplicateRecord]] = {}
            simplicial_labels, baseline_labels = [], []
            for sampler in cfg.samplers:
                if not sampler.runs_on(target_cfg):
                    continue
                spec = kernel_spec_for(sampler, target)
                progress(cfg, f"📊 {spec.display_name} on {target.descriptor}")
                cell_records = _run_cell(cfg, spec, target, {"cell": target_cfg.name, "target": target_cfg.name})
                records.extend(cell_records)
                by_sampler[spec.display_name] = cell_records
                (simplicial_labels if spec.is_simplicial else baseline_labels).append(spec.display_name)

            for simpl in simplicial_labels:
                for baseline in baseline_labels:
                    pairs = list(zip(by_sampler[simpl], by_sampler[baseline]))
                    key = {"target": target_cfg.name, "dimension": dim, "sampler": simpl, "baseline": baseline}
                    relative_rows.extend(_relative_rows(key, pairs, ("mean_ess", "min_ess")))
                    speed_rows.extend(_relative_rows(key, pairs, ("mean_esss", "min_esss")))

    summary = {"relative": _relative_summary(relative_rows, "relative_mean_ess")}
    timing_tables = {
        "relative": speed_rows,
        "relative_summary": _relative_summary(speed_rows, "relative_mean_esss"),
    }
    return build_result(cfg, records, (), summary, {"relative": relative_rows}, timing_tables=timing_tables)


def _ratio(a: Optional[float], b: Optional[float]) -> Optional[float]:
    if a is None or b is None or b == 0:
        return None
    return float(a / b)


def _relative_rows(key: Dict, pairs, statistics) -> List[Dict]:
    rows = []
    for ours, theirs in pairs:
        row = dict(key, replicate=ours.replicate)
        for statistic in statistics:
            row[f"relative_{statistic}"] = _ratio(getattr(ours, statistic), getattr(theirs, statistic))
        rows.append(row)
    return rows


def _relative_summary(rows: List[Dict], column: str) -> List[Dict]:
    grouped = defaultdict(list)
    for row in rows:
        grouped[(row["target"], row["dimension"], row["sampler"], row["baseline"])].append(row[column])

    summary_rows = []
    for (target, dim, simpl, baseline), values in grouped.items():
        values = [v for v in values if v is not None]
        summary_rows.append({
            "target": target, "dimension": dim, "sampler": simpl, "baseline": baseline,
            f"median_{column}": float(np.median(values)) if values else None,
        })
    return summary_rows


def _thinned_first_coordinate(trace: ChainTrace, points: int) -> Tuple[np.ndarray, np.ndarray]:
    series = trace.states[:, 0]
    stride = max(1, int(np.ceil(series.size / points)))
    return np.arange(0, series.size, stride), series[::stride]


def run_bimodal_study(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Intermodal jump counts of every sampler on two-component mixtures.

    At `bimodal.trace_dimension` the first replicate of each sampler also
    contributes a thinned trace of its first coordinate to the `traces`
    artifact, for stacked traceplots.
    """
    settings = cfg.bimodal
    records: List[ReplicateRecord] = []
    trace_rows: List[Dict] = []
    for target_cfg in cfg.targets:
        if target_cfg.kind != "bimodal":
            raise ConfigError(f"bimodal study needs bimodal targets, got '{target_cfg.kind}'")
        for dim in cfg.dimensions:
            target = build_target(target_cfg, dim, cfg.base_seed)
            for sampler in cfg.samplers:
                if not sampler.runs_on(target_cfg):
                    continue
                spec = kernel_spec_for(sampler, target)
                progress(cfg, f"🔀 {spec.display_name} on {target.descriptor}")
                keep = settings.trace_points if dim == settings.trace_dimension else 0
                cell_records, first_trace = _run_cell_traced(cfg, spec, target, {"cell": target_cfg.name},
                                                             count_jumps=True, keep_first_trace=keep > 0)
                records.extend(cell_records)
                if first_trace is not None:
                    iterations, values = _thinned_first_coordinate(first_trace, keep)
                    trace_rows.extend(
                        {"target": target_cfg.name, "algorithm": spec.display_name, "dimension": dim,
                         "iteration": int(s), "x0": float(v)}
                        for s, v in zip(iterations, values)
                    )

    jumps = defaultdict(list)
    for record in records:
        jumps[(record.algorithm, record.dimension)].append(record.extras["jumps"])
    summary = {"median_jumps": [
        {"algorithm": algorithm, "dimension": dim, "median_jumps": float(np.median(values))}
        for (algorithm, dim), values in jumps.items()
    ]}
    artifacts = {"traces": trace_rows} if trace_rows else {}
    return build_result(cfg, records, ("jumps",), summary, artifacts)
