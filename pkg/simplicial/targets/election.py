"""Loader for the 48-state 2016 election dataset."""
import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Union
import numpy as np
from sklearn.preprocessing import StandardScaler

from ..errors import DatasetError

COLUMNS = ["state_code", "latitude", "longitude", "population", "label"]
EXPECTED_ROWS = 48

_STATE_CODE = re.compile(r"^[A-Z]{2}$")


@dataclass
class ElectionDataset:
    """Standardized predictors and binary labels, one row per state."""
    state_codes: List[str]
    X: np.ndarray
    y: np.ndarray
    raw: np.ndarray  # latitude, longitude, population as read

    @property
    def n(self) -> int:
        return len(self.state_codes)


def _parse_float(value: str, line: int, column: str) -> float:
    try:
        parsed = float(value)
    except ValueError:
        raise DatasetError(f"non-numeric value '{value}'", row=line, column=column) from None
    if not np.isfinite(parsed):
        raise DatasetError(f"non-finite value '{value}'", row=line, column=column)
    return parsed


def load_election_csv(path: Union[str, Path]) -> ElectionDataset:
    """
    Parse and standardize the election CSV.

    Population is log-transformed before standardization; every predictor
    column ends up with mean 0 and variance 1. Row numbers in errors are
    file line numbers (the header is line 1).
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")

    codes: List[str] = []
    raw_rows: List[List[float]] = []
    labels: List[int] = []

    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise DatasetError("dataset file is empty", row=1)
        header = [h.strip() for h in header]
        if header != COLUMNS:
            raise DatasetError(f"expected header {','.join(COLUMNS)}, got {','.join(header)}", row=1)

        for line, fields in enumerate(reader, start=2):
            if not fields or all(not f.strip() for f in fields):
                continue
            if len(fields) != len(COLUMNS):
                raise DatasetError(f"expected {len(COLUMNS)} columns, got {len(fields)}", row=line)
            fields = [f.strip() for f in fields]

            code = fields[0]
            if not _STATE_CODE.match(code):
                raise DatasetError(f"invalid state code '{code}'", row=line, column="state_code")
            if code in codes:
                raise DatasetError(f"duplicate state code '{code}'", row=line, column="state_code")

            latitude = _parse_float(fields[1], line, "latitude")
            longitude = _parse_float(fields[2], line, "longitude")
            if not -90.0 <= latitude <= 90.0:
                raise DatasetError(f"latitude {latitude} out of range", row=line, column="latitude")
            if not -180.0 <= longitude <= 180.0:
                raise DatasetError(f"longitude {longitude} out of range", row=line, column="longitude")

            if not fields[3].isdigit():
                raise DatasetError(f"population must be a positive integer, got '{fields[3]}'", row=line, column="population")
            population = int(fields[3])
            if population <= 0:
                raise DatasetError("population must be positive", row=line, column="population")

            if fields[4] not in ("0", "1"):
                raise DatasetError(f"label must be 0 or 1, got '{fields[4]}'", row=line, column="label")

            codes.append(code)
            raw_rows.append([latitude, longitude, float(population)])
            labels.append(int(fields[4]))

    if len(codes) != EXPECTED_ROWS:
        raise DatasetError(f"expected {EXPECTED_ROWS} data rows, found {len(codes)}")

    raw = np.array(raw_rows, dtype=float)
    predictors = raw.copy()
    predictors[:, 2] = np.log(predictors[:, 2])
    X = StandardScaler().fit_transform(predictors)

    return ElectionDataset(state_codes=codes, X=X, y=np.array(labels, dtype=int), raw=raw)
