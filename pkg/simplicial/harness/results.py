"""Persistence of experiment results as JSON plus flat CSV tables."""
import csv
import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from pydantic import ValidationError

from ..errors import ResultsError
from ..types import AggregateRecord, ExperimentResult

RECORD_COLUMNS = [
    "experiment", "algorithm", "dimension", "replicate", "seed", "iterations",
    "mean_ess", "min_ess", "acceptance_rate",
]
TIMING_KEY_COLUMNS = ["algorithm", "dimension", "cell", "replicate"]
TIMING_COLUMNS = ["mean_esss", "min_esss", "wall_seconds"]


def result_paths(result: ExperimentResult, output_dir: Union[str, Path]) -> Dict[str, Path]:
    """
    Every file `write_results` produces for `result`, keyed by role.

    Timing files exist only when wall time was recorded; they are the only
    outputs that differ between two runs of the same config and seed.
    """
    output_dir = Path(output_dir)
    paths = {
        "json": output_dir / f"{result.experiment}.json",
        "csv": output_dir / f"{result.experiment}.csv",
    }
    for name in result.artifacts:
        paths[f"artifact:{name}"] = output_dir / f"{result.experiment}_{name}.csv"
    if result.has_timings:
        paths["timings"] = output_dir / f"{result.experiment}_timings.csv"
        paths["timing_aggregates"] = output_dir / f"{result.experiment}_timing_aggregates.csv"
        for name in result.timing_tables:
            paths[f"timing:{name}"] = output_dir / f"{result.experiment}_timing_{name}.csv"
    return paths


def _columns(rows: Sequence[Dict], leading: Sequence[str] = ()) -> List[str]:
    columns = list(leading)
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


def _write_csv(path: Path, rows: Sequence[Dict], columns: Sequence[str]):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({c: "" if row.get(c) is None else row.get(c) for c in columns})


def _read_csv(path: Path) -> List[Dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def _number(text: str) -> Optional[float]:
    return None if text == "" else float(text)


def timing_rows(result: ExperimentResult) -> List[Dict]:
    """One row of wall-clock values per replicate record."""
    rows = []
    for record in result.records:
        row = {
            "algorithm": record.algorithm,
            "dimension": record.dimension,
            "cell": str(record.extras.get("cell", "")),
            "replicate": record.replicate,
            "mean_esss": record.mean_esss,
            "min_esss": record.min_esss,
            "wall_seconds": record.wall_seconds,
        }
        row.update(record.timing_extras)
        rows.append(row)
    return rows


def write_results(result: ExperimentResult, output_dir: Union[str, Path], force: bool = False) -> List[Path]:
    """
    Write `<experiment>.json`, `<experiment>.csv`, one
    `<experiment>_<artifact>.csv` per artifact table and, when wall time was
    recorded, the `<experiment>_timing*.csv` files.

    Raises:
        ResultsError: no records, an output file exists and `force` is off,
            or the filesystem refuses the write
    """
    if not result.records:
        raise ResultsError(f"refusing to write '{result.experiment}': no replicate records")

    paths = result_paths(result, output_dir)
    if not force:
        existing = [str(p) for p in paths.values() if p.exists()]
        if existing:
            raise ResultsError(f"output already exists (use --force to overwrite): {', '.join(existing)}")

    try:
        Path(output_dir).mkdir(parents=True, exist_ok=True)

        with open(paths["json"], "w", encoding="utf-8") as f:
            json.dump(result.model_dump(mode="json"), f, indent=2, ensure_ascii=False)
            f.write("\n")

        rows = []
        for record in result.records:
            row = record.model_dump(exclude={"extras"})
            row.update(record.extras)
            rows.append(row)
        _write_csv(paths["csv"], rows, _columns(rows, RECORD_COLUMNS))

        for name, artifact_rows in result.artifacts.items():
            _write_csv(paths[f"artifact:{name}"], artifact_rows, _columns(artifact_rows))

        if result.has_timings:
            rows = timing_rows(result)
            _write_csv(paths["timings"], rows, _columns(rows, TIMING_KEY_COLUMNS + TIMING_COLUMNS))
            rows = [a.model_dump() for a in result.timing_aggregates]
            _write_csv(paths["timing_aggregates"], rows, _columns(rows))
            for name, table in result.timing_tables.items():
                _write_csv(paths[f"timing:{name}"], table, _columns(table))
    except OSError as e:
        raise ResultsError(f"could not write results to {output_dir}: {e}") from e

    return list(paths.values())


def _merge_timings(result: ExperimentResult, timings_path: Path, aggregates_path: Path) -> ExperimentResult:
    by_key = {}
    for row in _read_csv(timings_path):
        key = (row["algorithm"], int(row["dimension"]), row["cell"], int(row["replicate"]))
        by_key[key] = row

    records = []
    for record in result.records:
        row = by_key.get((record.algorithm, record.dimension, str(record.extras.get("cell", "")), record.replicate))
        if row is None:
            records.append(record)
            continue
        extras = {k: _number(v) for k, v in row.items() if k not in TIMING_KEY_COLUMNS + TIMING_COLUMNS}
        records.append(record.model_copy(update={
            "mean_esss": _number(row["mean_esss"]),
            "min_esss": _number(row["min_esss"]),
            "wall_seconds": _number(row["wall_seconds"]) or 0.0,
            "timing_extras": extras,
        }))

    aggregates = []
    if aggregates_path.exists():
        for row in _read_csv(aggregates_path):
            aggregates.append(AggregateRecord(
                algorithm=row["algorithm"],
                dimension=int(row["dimension"]),
                cell=row["cell"],
                statistic=row["statistic"],
                mean=_number(row["mean"]),
                median=_number(row["median"]),
                standard_error=_number(row["standard_error"]),
                replicates=int(row["replicates"]),
            ))
    return result.model_copy(update={"records": records, "timing_aggregates": aggregates})


def load_result(path: Union[str, Path]) -> ExperimentResult:
    """
    Parse a result JSON written by `write_results`, merging back the
    wall-clock values from `<experiment>_timings.csv` when it sits beside it.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ResultsError(f"result file not found: {path}") from e
    except (OSError, json.JSONDecodeError) as e:
        raise ResultsError(f"could not read result file {path}: {e}") from e

    try:
        result = ExperimentResult.model_validate(data)
    except ValidationError as e:
        raise ResultsError(f"{path} is not a valid result file: {e}") from e

    timings_path = path.with_name(f"{path.stem}_timings.csv")
    if not timings_path.exists():
        return result
    try:
        return _merge_timings(result, timings_path, path.with_name(f"{path.stem}_timing_aggregates.csv"))
    except (OSError, KeyError, ValueError, ValidationError) as e:
        raise ResultsError(f"could not read timings beside {path}: {e}") from e
