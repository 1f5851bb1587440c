"""Extra-dimensional sampler demo: proposal point clouds and QQ accuracy checks."""
from typing import Dict, List, Tuple
import numpy as np
from scipy import stats

from ..config import ExperimentConfig, SamplerConfig
from ..diagnostics import intermodal_jumps, qq_points
from ..errors import InvalidArgumentError
from ..samplers import propose_extra_dimensional, run_chain, select_index
from ..samplers.simplicial import evaluate_points
from ..targets import GaussianTarget, spherical
from ..types import ExperimentResult, ReplicateRecord
from .runner import (
    build_result,
    build_target,
    burn_in,
    initial_position,
    kernel_spec_for,
    progress,
    replicate_record,
    run_replicates,
)


def largest_coincident_group(points: np.ndarray) -> int:
    """Size of the largest set of exactly equal rows."""
    _, counts = np.unique(points, axis=0, return_counts=True)
    return int(np.max(counts))


def _point_row(step: int, role: str, vertex: int, point: np.ndarray) -> Dict:
    row = {"step": step, "role": role, "vertex": vertex}
    row.update({f"x{j}": float(v) for j, v in enumerate(point)})
    return row


def proposal_clouds(cfg: ExperimentConfig) -> Tuple[List[Dict], List[int]]:
    """
    Walk a few extra-dimensional steps on a standard normal from
    `cloud_start` (far out in the tails by default) and keep every point:
    the current state, the projected unrotated vertices, the projected
    proposals and the selected point.
    """
    demo = cfg.extra_dimensional
    dim = demo.cloud_dimension
    target = GaussianTarget(spherical(dim), f"spherical-{dim}d")
    rng = np.random.default_rng(cfg.base_seed)
    position = demo.start_position()
    log_density = target.log_density(position)

    rows: List[Dict] = []
    coincident: List[int] = []
    for step in range(demo.cloud_steps):
        proposal = propose_extra_dimensional(position, demo.cloud_proposals, demo.cloud_edge_length, rng)
        log_densities = np.append(evaluate_points(target, proposal.projected[:-1]), log_density)
        chosen = select_index(log_densities, rng)

        rows.append(_point_row(step, "initial", -1, position))
        rows.extend(_point_row(step, "unrotated", i, p) for i, p in enumerate(proposal.unrotated))
        rows.extend(_point_row(step, "proposal", i, p) for i, p in enumerate(proposal.projected))
        rows.append(_point_row(step, "selected", chosen, proposal.projected[chosen]))
        coincident.append(largest_coincident_group(proposal.unrotated))

        position = proposal.projected[chosen].copy()
        log_density = float(log_densities[chosen])
    return rows, coincident


def in_high_density_region(point: np.ndarray, level: float = 0.99) -> bool:
    """Whether `point` lies inside the `level` probability ellipse of a standard normal."""
    point = np.asarray(point, dtype=float)
    return bool(point @ point <= stats.chi2.ppf(level, point.size))


def cloud_endpoint(rows: List[Dict]) -> np.ndarray:
    """Position selected at the last step of a proposal-cloud walk."""
    last = [row for row in rows if row["role"] == "selected"][-1]
    return np.array([last[f"x{j}"] for j in range(len(last) - 3)])


def _thin(samples: np.ndarray, limit: int) -> np.ndarray:
    if samples.shape[0] <= limit:
        return samples
    stride = int(np.ceil(samples.shape[0] / limit))
    return samples[::stride]


def run_extra_dimensional_demo(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Point clouds for a P-proposal sampler on a 2D Gaussian, then chains of
    the extra-dimensional sampler on each configured target with per-coordinate
    QQ correlations against the exact marginals.
    """
    demo = cfg.extra_dimensional
    progress(cfg, f"🔭 Proposal clouds: {demo.cloud_proposals} proposals in {demo.cloud_dimension}D")
    cloud_rows, coincident = proposal_clouds(cfg)
    artifacts: Dict[str, List[Dict]] = {"clouds": cloud_rows}
    endpoint = cloud_endpoint(cloud_rows)
    summary: Dict = {
        "coincident_unrotated": coincident,
        "cloud_start": [float(v) for v in demo.start_position()],
        "cloud_end": [float(v) for v in endpoint],
        "cloud_reached_high_density": in_high_density_region(endpoint),
        "qq": [],
    }

    sampler = next((s for s in cfg.samplers if s.algorithm == "ed-simpl"),
                   SamplerConfig(algorithm="ed-simpl", proposals=demo.qq_proposals))
    records: List[ReplicateRecord] = []
    for target_cfg in cfg.targets:
        dim = demo.qq_dimension
        target = build_target(target_cfg, dim, cfg.base_seed)
        spec = kernel_spec_for(sampler, target, proposals=sampler.proposals or demo.qq_proposals)
        centers = target.mode_centers()
        start = initial_position(target)
        progress(cfg, f"🔭 {spec.display_name} ({spec.proposals} proposals) on {target.descriptor}")

        def task(replicate: int, seed: int, target=target, spec=spec, centers=centers, start=start):
            trace = run_chain(spec, target, cfg.iterations, start, seed)
            samples = burn_in(trace.states[1:], cfg.burn_in_fraction)
            extras = {"cell": target_cfg.name, "proposals": spec.proposals, "edge_length": float(trace.final_scale)}
            if centers.shape[0] >= 2:
                extras["jumps"] = intermodal_jumps(trace, centers)
            qq = {}
            try:
                thinned = _thin(samples, demo.qq_max_samples)
                for j in range(dim):
                    qq[j] = qq_points(thinned[:, j], lambda p, j=j: target.marginal_quantile(j, p))
                    extras[f"qq_corr_{j}"] = qq[j].correlation
            except InvalidArgumentError as e:
                print(f"⚠️  QQ skipped for {target.descriptor} replicate {replicate}: {e}")
            return replicate_record(cfg, trace, replicate, spec.display_name, samples=samples, extras=extras), qq

        outcomes = run_replicates(task, cfg.seeds(), cfg.threads)
        records.extend(record for record, _ in outcomes)

        first_qq = outcomes[0][1]
        qq_rows = []
        for j, result in first_qq.items():
            keep = np.unique(np.linspace(0, result.empirical.size - 1, demo.qq_rows).astype(int))
            qq_rows.extend(
                {"coordinate": j, "empirical": float(result.empirical[k]), "theoretical": float(result.theoretical[k])}
                for k in keep
            )
        artifacts[f"qq_{target_cfg.name}"] = qq_rows
        for j in range(dim):
            values = [r.extras.get(f"qq_corr_{j}") for r, _ in outcomes]
            values = [v for v in values if v is not None]
            summary["qq"].append({
                "target": target_cfg.name,
                "coordinate": j,
                "min_correlation": float(np.min(values)) if values else None,
            })

    extra_statistics = [f"qq_corr_{j}" for j in range(demo.qq_dimension)] + ["jumps"]
    return build_result(cfg, records, extra_statistics, summary, artifacts)
