"""Trajectory and report export."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .trajectory import TrackedTrajectory


def _fmt(value: float) -> str:
    # 17 significant digits round-trip every finite double exactly
    return format(float(value), ".17g")


def csv_header(N: int) -> list:
    cols = ["t"]
    cols += [f"{part}_x{n}" for n in range(1, N + 1) for part in ("re", "im")]
    cols += [f"{part}_v{n}" for n in range(1, N + 1) for part in ("re", "im")]
    return cols


def write_csv(traj: TrackedTrajectory, path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(csv_header(traj.N))
        for t, x, v in zip(traj.times, traj.x, traj.v):
            row = [_fmt(t)]
            for z in (*x, *v):
                row += [_fmt(z.real), _fmt(z.imag)]
            writer.writerow(row)
    return path


def read_csv(path, source: str = "csv") -> TrackedTrajectory:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(c) for c in row] for row in reader], dtype=float)
    N = (len(header) - 1) // 4
    if header != csv_header(N):
        raise ValueError(f"{path}: unexpected header")
    data = data.reshape(-1, 1 + 4 * N)
    z = data[:, 1::2] + 1j * data[:, 2::2]
    return TrackedTrajectory(times=data[:, 0], x=z[:, :N], v=z[:, N:], source=source)


def jsonable(value):
    """Recursively convert numpy and complex values for :func:`json.dumps`."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [jsonable(value.real), jsonable(value.imag)]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_json(obj, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(jsonable(obj), indent=2) + "\n", encoding="utf-8")
    return path


def trajectory_dict(traj: TrackedTrajectory) -> dict:
    out = {"source": traj.source, "t": traj.times, "x": traj.x, "v": traj.v}
    if traj.ybar is not None:
        out["ybar"] = traj.ybar
    return out
