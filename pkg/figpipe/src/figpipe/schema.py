"""Readers for the harness's documented file formats.

The pipeline consumes only these schemas — trace.csv, sweep.csv, compare.csv,
and summary.json — never in-process state from the simulation package.  A
file missing required columns raises :class:`SchemaError` naming each
offender so a broken handoff is diagnosable from the message alone.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = [
    "SchemaError",
    "TRACE_COLUMNS",
    "SWEEP_COLUMNS",
    "COMPARE_COLUMNS",
    "read_table",
    "read_trace",
    "read_sweep",
    "read_compare",
    "read_summary",
]

TRACE_COLUMNS = ("step", "T_i", "T_tilde", "g_c", "P_e", "g_est", "dg_est")
SWEEP_COLUMNS = ("axis_value", "mean_error", "error_std", "mean_dg", "reliable_fraction")
COMPARE_COLUMNS = (
    "sigma_g",
    "bge_precision",
    "freq_precision",
    "improvement_ratio",
    "bge_reliable_fraction",
)


class SchemaError(ValueError):
    """An input file does not match the documented table schema."""


def _check_columns(path: Path, present, required) -> None:
    missing = [c for c in required if c not in present]
    if missing:
        raise SchemaError(
            f"{path}: missing required column(s): {', '.join(missing)}"
        )


def read_table(path: str | Path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Load a CSV or JSON table into float column arrays.

    The format is inferred from the suffix.  Extra columns are passed through
    untouched; missing required ones raise :class:`SchemaError`.
    """
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: input file does not exist")
    if path.suffix == ".json":
        records = json.loads(path.read_text())
        if not isinstance(records, list):
            raise SchemaError(f"{path}: expected a JSON array of row objects")
        if not records:
            raise SchemaError(f"{path}: table has no data rows")
        _check_columns(path, records[0].keys(), required)
        keys = list(records[0].keys())
        return {k: np.array([float(r[k]) for r in records]) for k in keys}
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: file is empty")
    header, data = rows[0], rows[1:]
    _check_columns(path, header, required)
    if not data:
        raise SchemaError(f"{path}: table has no data rows")
    cols = list(zip(*data))
    return {name: np.array([float(v) for v in col]) for name, col in zip(header, cols)}


def read_trace(path: str | Path) -> dict[str, np.ndarray]:
    return read_table(path, TRACE_COLUMNS)


def read_sweep(path: str | Path) -> dict[str, np.ndarray]:
    return read_table(path, SWEEP_COLUMNS)


def read_compare(path: str | Path) -> dict[str, np.ndarray]:
    return read_table(path, COMPARE_COLUMNS)


def read_summary(path: str | Path) -> dict:
    """Load summary.json; absent file yields an empty summary (no guide lines)."""
    path = Path(path)
    if not path.exists():
        return {}
    payload = json.loads(path.read_text())
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    return payload
