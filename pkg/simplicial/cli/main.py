"""Command-line interface for the simplicial sampler experiments."""
import click
from pathlib import Path
from typing import Optional

from ..config import ExperimentConfig, load_dotenv_files
from ..errors import ConfigError, DatasetError, ResultsError
from ..harness import load_result, run_experiment, write_results
from ..harness.gp_benchmark import resolve_dataset_path
from ..targets import load_election_csv

# Load environment variables from .env files
load_dotenv_files()

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_FAILURE = 4

SUMMARY_STATISTICS = (
    "mean_ess", "min_ess", "mean_esss", "acceptance_rate", "jumps", "its_to_err10", "secs_to_err10",
)


def exit_code_for(error: Exception) -> int:
    if isinstance(error, ConfigError):
        return EXIT_CONFIG
    if isinstance(error, DatasetError):
        return EXIT_DATA
    return EXIT_FAILURE


def _load(config_path: str, quick: bool = False, threads: Optional[int] = None,
          seed: Optional[int] = None) -> ExperimentConfig:
    cfg = ExperimentConfig.load(config_path)
    if quick:
        cfg = cfg.quick()
    if threads is not None:
        if threads < 1:
            raise ConfigError("--threads must be at least 1")
        cfg.threads = threads
    if seed is not None:
        cfg.base_seed = seed
    return cfg


def _describe(cfg: ExperimentConfig):
    click.echo(f"   🧪 {cfg.name} ({cfg.kind})")
    click.echo(f"   📏 dimensions: {', '.join(str(d) for d in cfg.dimensions)}")
    click.echo(f"   🔁 {cfg.replicates} replicates x {cfg.iterations:,} iterations, seeds from {cfg.base_seed}")
    labels = [s.label or s.algorithm for s in cfg.samplers]
    click.echo(f"   🎲 samplers: {', '.join(labels)}")
    if cfg.acceptance_grid is not None:
        click.echo(f"   🎯 acceptance grid: {cfg.acceptance_grid.count} points "
                   f"from {cfg.acceptance_grid.start} to {cfg.acceptance_grid.stop}")


@click.group()
def cli():
    """Simplicial sampler - multiproposal MCMC experiments."""
    pass


@cli.command()
@click.argument('config_path')
@click.option('--quick', is_flag=True, help='Desk-scale preset (10% of iterations and replicates)')
@click.option('--output', '-o', default=None, help='Output directory (default: config output_dir)')
@click.option('--force', is_flag=True, help='Overwrite existing result files')
@click.option('--threads', '-t', type=int, default=None, help='Replicates run concurrently')
@click.option('--seed', '-s', type=int, default=None, help='Override the base seed')
def run(config_path, quick, output, force, threads, seed):
    """Run an experiment and write its result files."""

    try:
        cfg = _load(config_path, quick, threads, seed)
        output_path = Path(output or cfg.output_dir)

        if not force and (output_path / f"{cfg.name}.json").exists():
            raise ResultsError(f"output already exists (use --force to overwrite): {output_path / f'{cfg.name}.json'}")

        click.echo(f"🚀 Starting experiment{' (quick)' if quick else ''}")
        _describe(cfg)

        result = run_experiment(cfg, Path(config_path).parent)
        paths = write_results(result, output_path, force=force)

        click.echo("✅ Experiment completed!")
        click.echo(f"   📊 {len(result.records)} replicate records, {len(result.aggregates)} aggregates")
        for path in paths:
            click.echo(f"   📄 {path}")

    except Exception as e:
        click.echo(f"❌ Experiment failed: {e}", err=True)
        raise SystemExit(exit_code_for(e))


@cli.command()
@click.argument('config_path')
def validate(config_path):
    """Check a config (and its dataset, for the GP benchmark) without running it."""

    try:
        cfg = _load(config_path)
        if cfg.kind == "gp":
            dataset = load_election_csv(resolve_dataset_path(cfg, Path(config_path).parent))
            click.echo(f"🗳️  Dataset OK: {dataset.n} states")
        click.echo("✅ Config OK")
        _describe(cfg)

    except Exception as e:
        click.echo(f"❌ Invalid: {e}", err=True)
        raise SystemExit(exit_code_for(e))


@cli.command()
@click.argument('result_path')
@click.option('--statistic', '-s', multiple=True, help='Statistics to show (repeatable)')
def summarize(result_path, statistic):
    """Print the aggregate table of a result JSON."""

    try:
        result = load_result(result_path)
        wanted = set(statistic or SUMMARY_STATISTICS)

        click.echo(f"📊 {result.experiment} ({result.kind}), library {result.library_version}")
        click.echo(f"   🔁 {len(result.seeds)} seeds, {len(result.records)} replicate records")
        click.echo("")
        click.echo(f"{'algorithm':<16}{'dim':>5}  {'cell':<22}{'statistic':<20}{'mean':>12}{'(se)':>12}{'median':>12}")
        # wall-clock rows are present when the timing files sit beside the JSON
        for agg in result.aggregates + result.timing_aggregates:
            if agg.statistic not in wanted or agg.mean is None:
                continue
            se = f"({agg.standard_error:.4g})" if agg.standard_error is not None else ""
            click.echo(f"{agg.algorithm:<16}{agg.dimension:>5}  {agg.cell:<22}{agg.statistic:<20}"
                       f"{agg.mean:>12.4g}{se:>12}{agg.median:>12.4g}")

    except Exception as e:
        click.echo(f"❌ Could not summarize: {e}", err=True)
        raise SystemExit(exit_code_for(e))
