"""Sampling and export of the solution-count decomposition of the surface.

The pillowcase is covered by the trigonometric chart
``(theta, sigma) -> (cos theta, cos sigma, cos(theta - sigma))``; a
cell-centered grid over ``(-pi, pi)^2`` is classified cell by cell and
written to CSV, PLY, or JSON.  Output bytes are deterministic for a given
base, grid, and format: fixed column order, fixed float formatting, no
timestamps.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from . import __version__
from .errors import EmptyRegion, InvalidGrid, IoFailure
from .geometry import BaseTriangle, as_triple
from .regions import classify, count_prediction
from .tolerances import DEFAULT, Tolerances

__all__ = ["param_surface", "sample_decomposition", "export_decomposition"]

_FORMATS = ("csv", "ply", "json")

# RGB per observed count; gray for curves and unresolved labels.
_COLORS = {
    2.0: (31, 119, 180),
    1.0: (140, 86, 75),
    0.0: (44, 160, 44),
}
_GRAY = (127, 127, 127)


def param_surface(theta, sigma):
    """Chart map onto the pillowcase; accepts scalars or arrays."""
    theta = np.asarray(theta, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    return np.stack(
        [np.cos(theta), np.cos(sigma), np.cos(theta - sigma)],
        axis=-1,
    )


def _grid_axes(grid: int) -> np.ndarray:
    step = 2.0 * math.pi / grid
    return -math.pi + (np.arange(grid) + 0.5) * step


def sample_decomposition(base: BaseTriangle, grid: int,
                         tol: Tolerances = DEFAULT) -> list[dict]:
    """Classify a cell-centered chart grid; one record per cell.

    Record keys: theta, sigma, a (length-3 tuple), region, count
    (float, math.inf, or None when no count is claimed).
    """
    if grid < 16:
        raise InvalidGrid(f"grid must be at least 16, got {grid}")
    axis = _grid_axes(grid)
    records = []
    for theta in axis:
        triples = param_surface(np.full(grid, theta), axis)
        for sigma, row in zip(axis, triples):
            a = as_triple(row)
            label = classify(base, a, tol)
            try:
                pred = count_prediction(base, label, tol)
                count = pred.count
            except EmptyRegion:
                count = None
            records.append({
                "theta": float(theta),
                "sigma": float(sigma),
                "a": (a.a1, a.a2, a.a3),
                "region": label.describe(),
                "count": count,
            })
    return records


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _count_token(count) -> str:
    if count is None:
        return ""
    if math.isinf(count):
        return "inf"
    return str(int(count))


def _render_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["theta", "sigma", "a1", "a2", "a3", "region", "count"])
    for rec in records:
        a1, a2, a3 = rec["a"]
        writer.writerow([
            _fmt(rec["theta"]), _fmt(rec["sigma"]),
            _fmt(a1), _fmt(a2), _fmt(a3),
            rec["region"], _count_token(rec["count"]),
        ])
    return buf.getvalue()


def _render_ply(records: list[dict]) -> str:
    lines = [
        "ply",
        "format ascii 1.0",
        "comment solution-count decomposition of the angle-cosine surface",
        f"element vertex {len(records)}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        "end_header",
    ]
    for rec in records:
        a1, a2, a3 = rec["a"]
        color = _COLORS.get(rec["count"], _GRAY)
        lines.append(f"{a1:.8f} {a2:.8f} {a3:.8f} "
                     f"{color[0]} {color[1]} {color[2]}")
    return "\n".join(lines) + "\n"


def _render_json(base: BaseTriangle, grid: int, records: list[dict],
                 tol: Tolerances) -> str:
    payload = {
        "version": __version__,
        "sides": list(base.sides),
        "angle_cosines": list(base.angle_cosines),
        "grid": grid,
        "tolerances": {
            "surface": tol.surface,
            "plane": tol.plane,
            "point": tol.point,
            "angle": tol.angle,
        },
        "samples": [
            {
                "theta": rec["theta"],
                "sigma": rec["sigma"],
                "a": list(rec["a"]),
                "region": rec["region"],
                "count": (None if rec["count"] is None
                          else ("inf" if math.isinf(rec["count"])
                                else int(rec["count"]))),
            }
            for rec in records
        ],
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def export_decomposition(base: BaseTriangle, grid: int, fmt: str, path: str,
                         tol: Tolerances = DEFAULT) -> int:
    """Write the classified grid to ``path``; returns the record count.

    Raises InvalidGrid for grid < 16 or an unknown format, IoFailure when
    the file cannot be written.
    """
    if fmt not in _FORMATS:
        raise InvalidGrid(f"unknown format {fmt!r}, expected one of {_FORMATS}")
    records = sample_decomposition(base, grid, tol)
    if fmt == "csv":
        text = _render_csv(records)
    elif fmt == "ply":
        text = _render_ply(records)
    else:
        text = _render_json(base, grid, records, tol)
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return len(records)
