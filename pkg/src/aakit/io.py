"""CSV matrices, JSON run reports, and deterministic SVG hull plots.

File layout convention: CSV rows are data points (the analyst view), while
in memory columns are points; both boundaries transpose.  Numeric cells are
written with 17 significant digits so every finite double survives a
round-trip bitwise.  SVG output contains no timestamps or generated ids and
is byte-identical across runs for identical input.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .types import as_matrix

_FMT = "%.17g"

_HULL_PALETTE = (
    "#1b6ca8",
    "#d1495b",
    "#66a182",
    "#edae49",
    "#7768ae",
    "#2e4057",
    "#c08552",
    "#00798c",
)


class MatrixCsvError(ValueError):
    """Raised for malformed matrix CSV files, with file coordinates."""


def read_matrix_csv(path) -> np.ndarray:
    """Load a points-as-rows CSV into an m x n columns-are-points matrix.

    A single header row is auto-detected (first row with any non-numeric
    cell).  Ragged rows, non-numeric cells, and non-finite values are
    rejected with the offending line named.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such matrix file: {path}")
    rows: list[list[float]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        width = None
        for lineno, record in enumerate(reader, start=1):
            if not record or all(cell.strip() == "" for cell in record):
                continue
            values = []
            numeric = True
            for col, cell in enumerate(record):
                try:
                    values.append(float(cell))
                except ValueError:
                    numeric = False
                    break
            if not numeric:
                if lineno == 1 and not rows:
                    continue  # header row
                raise MatrixCsvError(
                    f"{path}: non-numeric cell {record[col]!r} at line {lineno}, column {col + 1}"
                )
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise MatrixCsvError(
                    f"{path}: ragged row at line {lineno} "
                    f"({len(values)} cells, expected {width})"
                )
            for col, v in enumerate(values):
                if not np.isfinite(v):
                    raise MatrixCsvError(
                        f"{path}: non-finite value at line {lineno}, column {col + 1}"
                    )
            rows.append(values)
    if not rows:
        raise MatrixCsvError(f"{path}: no numeric rows")
    return np.asarray(rows, dtype=np.float64).T


def write_matrix_csv(M, path, orientation: str = "points-as-rows") -> None:
    """Write a matrix deterministically (LF endings, 17 significant digits).

    ``points-as-rows`` transposes the in-memory columns-are-points layout
    into the analyst file convention; ``raw-columns`` writes the array
    rows as-is (used for factor matrices whose columns must stay columns).
    """
    M = as_matrix(M)
    if orientation == "points-as-rows":
        M = M.T
    elif orientation != "raw-columns":
        raise ValueError(f"unknown orientation {orientation!r}")
    if str(path) == "":
        raise ValueError("empty output path")
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        for row in M:
            fh.write(",".join(_FMT % v for v in row))
            fh.write("\n")


@dataclass
class RunReport:
    """Round-trippable record of one CLI factorization run."""

    command: str
    config: dict
    seed: int
    rss: float
    rss_history: list[float]
    iterations: int
    converged: bool
    timings_ms: dict = field(default_factory=dict)
    selected_indices: list[int] | None = None
    certificates: list[dict] | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(**data)


def write_report_json(report: RunReport, path) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_report_json(path) -> RunReport:
    with open(path) as fh:
        return RunReport.from_dict(json.load(fh))


def write_svg_hull_plot(points, hulls, path, size: tuple[int, int] = (640, 480)) -> None:
    """Overlay plot: data points as dots, each hull as a closed path.

    ``hulls`` is a list of (label, 2 x q vertex coordinate array) pairs in
    drawing order; a legend entry is emitted per hull.  Output is plain
    SVG 1.1 with fixed-precision coordinates, byte-identical across runs.
    """
    P = as_matrix(points, "points")
    if P.shape[0] != 2:
        raise ValueError(f"SVG plot needs 2-D points, got {P.shape[0]} rows")
    width, height = size
    margin = 40.0

    xs, ys = P[0], P[1]
    all_x = [xs]
    all_y = [ys]
    for _, V in hulls:
        V = as_matrix(V, "hull vertices")
        all_x.append(V[0])
        all_y.append(V[1])
    x_lo, x_hi = min(a.min() for a in all_x), max(a.max() for a in all_x)
    y_lo, y_hi = min(a.min() for a in all_y), max(a.max() for a in all_y)
    span_x = max(x_hi - x_lo, 1e-9)
    span_y = max(y_hi - y_lo, 1e-9)
    scale = min((width - 2 * margin) / span_x, (height - 2 * margin) / span_y)

    def to_px(x: float, y: float) -> tuple[float, float]:
        px = margin + (x - x_lo) * scale
        py = height - margin - (y - y_lo) * scale  # flip: SVG y grows downward
        return px, py

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    for j in range(P.shape[1]):
        px, py = to_px(P[0, j], P[1, j])
        lines.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="2.5" fill="#444444"/>')
    for h, (label, V) in enumerate(hulls):
        V = np.asarray(V, dtype=np.float64)
        color = _HULL_PALETTE[h % len(_HULL_PALETTE)]
        coords = [to_px(V[0, j], V[1, j]) for j in range(V.shape[1])]
        d = "M " + " L ".join(f"{px:.3f},{py:.3f}" for px, py in coords) + " Z"
        lines.append(
            f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.8"/>'
        )
        ly = 20.0 + 18.0 * h
        lines.append(
            f'<rect x="12" y="{ly - 9:.3f}" width="14" height="4" fill="{color}"/>'
        )
        lines.append(
            f'<text x="32" y="{ly:.3f}" font-family="sans-serif" font-size="12">'
            f"{_escape(label)}</text>"
        )
    lines.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
