"""Trajectory post-processing: polylines, per-medium totals, transitions."""

import csv
import json
import os

from .world import TRAJECTORY_HEADER


class TrajectoryFormatError(ValueError):
    pass


def read_trajectory(path: str):
    """Parse a trajectory CSV; malformed rows raise with their line number."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRAJECTORY_HEADER:
            raise TrajectoryFormatError(
                f"{path}:1: bad header {header!r}, expected {TRAJECTORY_HEADER}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(TRAJECTORY_HEADER):
                raise TrajectoryFormatError(
                    f"{path}:{lineno}: expected {len(TRAJECTORY_HEADER)} "
                    f"fields, found {len(row)}")
            try:
                rec = {"step": int(row[0]), "t": float(row[1]),
                       "x": float(row[2]), "y": float(row[3]),
                       "z": float(row[4]), "yaw": float(row[5]),
                       "medium": row[6], "reward": float(row[7]),
                       "min_range": float(row[8]), "d_goal": float(row[9])}
            except ValueError as exc:
                raise TrajectoryFormatError(f"{path}:{lineno}: {exc}") from exc
            if rec["medium"] not in ("air", "water"):
                raise TrajectoryFormatError(
                    f"{path}:{lineno}: medium must be air|water, "
                    f"got {rec['medium']!r}")
            rows.append(rec)
    return rows


def analyze_trajectory(path: str, out_dir: str):
    """Write x-y/x-z polylines, medium transitions and per-medium totals."""
    rows = read_trajectory(path)
    os.makedirs(out_dir, exist_ok=True)

    with open(os.path.join(out_dir, "xy.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "x", "y"])
        for r in rows:
            w.writerow([r["step"], f"{r['x']:.6f}", f"{r['y']:.6f}"])
    with open(os.path.join(out_dir, "xz.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "x", "z"])
        for r in rows:
            w.writerow([r["step"], f"{r['x']:.6f}", f"{r['z']:.6f}"])

    transitions = []
    for prev, cur in zip(rows, rows[1:]):
        if cur["medium"] != prev["medium"]:
            transitions.append({"step": cur["step"], "t": cur["t"],
                                "from": prev["medium"], "to": cur["medium"]})
    with open(os.path.join(out_dir, "transitions.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "t", "from", "to"])
        for tr in transitions:
            w.writerow([tr["step"], f"{tr['t']:.6f}", tr["from"], tr["to"]])

    dt = rows[0]["t"] / rows[0]["step"] if rows and rows[0]["step"] else 0.0
    n_air = sum(1 for r in rows if r["medium"] == "air")
    n_water = len(rows) - n_air
    summary = {"rows": len(rows), "t_air": n_air * dt, "t_water": n_water * dt,
               "medium_changes": len(transitions)}
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary
