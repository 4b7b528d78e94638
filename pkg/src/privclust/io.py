"""CSV ingestion/serialization, label files, and experiment report files (JSON)."""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .datagen import PairedDataset


def load_matrix(path, header: str | bool = "auto") -> np.ndarray:
    """Parse a comma-separated UTF-8 file of finite reals, one instance per row.

    header="auto" skips a first row that fails numeric parsing. Errors name
    the offending row and column (1-based).
    """
    path = Path(path)
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip() != ""]
    if not lines:
        raise ValueError(f"{path}: empty file")

    def parse(line: str, row_no: int):
        cells = line.split(",")
        out = []
        for col, cell in enumerate(cells, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise ValueError(f"{path}: row {row_no}, column {col}: could not parse {cell.strip()!r}") from None
            if not np.isfinite(value):
                raise ValueError(f"{path}: row {row_no}, column {col}: non-finite value {cell.strip()!r}")
            out.append(value)
        return out

    start = 0
    if header is True:
        start = 1
    elif header == "auto":
        try:
            parse(lines[0], 1)
        except ValueError:
            start = 1
    if start >= len(lines):
        raise ValueError(f"{path}: no data rows after header")

    rows = []
    width = None
    for row_no, line in enumerate(lines[start:], start=start + 1):
        row = parse(line, row_no)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError(f"{path}: row {row_no}: expected {width} columns, found {len(row)}")
        rows.append(row)
    return np.array(rows, dtype=float)


def save_matrix(path, m) -> None:
    m = np.asarray(m, dtype=float)
    lines = [",".join(repr(float(v)) for v in row) for row in np.atleast_2d(m)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_labels(path) -> np.ndarray:
    """One integer label per row."""
    column = load_matrix(path, header="auto")
    if column.shape[1] != 1:
        raise ValueError(f"{path}: label file must have exactly one column, found {column.shape[1]}")
    values = column[:, 0]
    if not (values == np.floor(values)).all():
        raise ValueError(f"{path}: labels must be integers")
    return values.astype(np.int64)


def save_labels(path, labels) -> None:
    Path(path).write_text("\n".join(str(int(v)) for v in labels) + "\n", encoding="utf-8")


def load_paired(path_x, path_xp, path_truth=None) -> PairedDataset:
    """Load row-aligned technical and privileged matrices plus optional truth labels."""
    tech = load_matrix(path_x)
    priv = load_matrix(path_xp)
    if tech.shape[0] != priv.shape[0]:
        raise ValueError(f"row-count mismatch: {path_x} has {tech.shape[0]} rows, {path_xp} has {priv.shape[0]}")
    truth = None
    if path_truth is not None:
        truth = load_labels(path_truth)
        if len(truth) != tech.shape[0]:
            raise ValueError(f"truth length mismatch: {path_truth} has {len(truth)} labels for {tech.shape[0]} rows")
    return PairedDataset(tech=tech, priv=priv, truth=truth)


def summarize(values) -> dict:
    """Min/max/mean/median/st_dev of a score list (sample st.dev; 0 for a single value)."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("no values to summarize")
    return {
        "min": min(vals),
        "max": max(vals),
        "mean": statistics.fmean(vals),
        "median": float(statistics.median(vals)),
        "st_dev": statistics.stdev(vals) if len(vals) > 1 else 0.0,
    }


@dataclass
class ExperimentReport:
    """Per-method benchmark record: one entry per repetition plus summary statistics."""

    method: str
    dataset_id: str
    runs: list  # {"rep", "seed", "ari", "nmi"} with None scores when truth is absent
    summary: dict  # {"ari": {...}, "nmi": {...}} or {} without truth
    config: dict = field(default_factory=dict)


def write_report(report: ExperimentReport, path) -> None:
    if not report.runs:
        raise ValueError("no runs")
    payload = {
        "method": report.method,
        "dataset_id": report.dataset_id,
        "runs": report.runs,
        "summary": report.summary,
        "config": report.config,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_report(path) -> ExperimentReport:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed report: {exc}") from exc
    for key in ("method", "dataset_id", "runs", "summary"):
        if key not in data:
            raise ValueError(f"{path}: malformed report: missing '{key}'")
    if not data["runs"]:
        raise ValueError(f"{path}: malformed report: no runs")
    return ExperimentReport(
        method=data["method"],
        dataset_id=data["dataset_id"],
        runs=data["runs"],
        summary=data["summary"],
        config=data.get("config", {}),
    )
