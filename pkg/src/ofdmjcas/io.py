"""CSV and JSON artifacts.

Every CSV starts with a ``# ofdmjcas <table> v<version>`` comment line,
then a header row. Files are UTF-8 with LF line endings.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

CSV_VERSION = 1

# fixed column sets, keyed by table name
COLUMNS = {
    "allocation_diagonal": ("k", "subcarrier", "symbol"),
    "allocation_comb": ("m", "n", "subcarrier", "symbol"),
    "frame_diagonal": ("k", "real", "imag"),
    "frame_comb": ("m", "n", "real", "imag"),
    "spectrum_diagonal": ("bin", "magnitude", "magnitude_db"),
    "spectrum_comb": ("p", "q", "magnitude", "magnitude_db"),
    "scores": ("frame", "time", "label", "predicted_low", "predicted_high", "predicted_amp_db",
               "measured_low", "measured_high", "measured_amp_db", "cost"),
    "bench": ("pipeline", "N", "complex_multiplications", "wall_time_ns"),
}


def _plain(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_csv(path, table: str, rows: Iterable[dict]) -> Path:
    path = Path(path)
    columns = COLUMNS[table]
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(f"# ofdmjcas {table} v{CSV_VERSION}\n")
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n",
                                extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _plain(v) for k, v in row.items()})
    return path


def read_csv(path) -> list[dict]:
    """Rows of an artifact CSV as string dicts, skipping comment lines."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        lines = (line for line in fh if not line.startswith("#"))
        return list(csv.DictReader(lines))


def _json_default(obj):
    obj = _plain(obj)
    if isinstance(obj, (int, float, bool)):
        return obj
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _scrub(obj):
    # JSON has no inf/nan
    if isinstance(obj, dict):
        return {k: _scrub(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_scrub(v) for v in obj]
    obj = _plain(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def dumps(obj) -> str:
    return json.dumps(_scrub(obj), indent=2, sort_keys=True, default=_json_default) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj), encoding="utf-8", newline="\n")
    return path
