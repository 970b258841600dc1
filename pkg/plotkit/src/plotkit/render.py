"""Figure rendering from squeezing-toolkit CSV artifacts.

This package draws what the CSVs contain and computes no physics of its
own: heatmap cells come verbatim from ``map.csv`` (columns
``x_label,y_label,value_db``), decay curves verbatim from ``series.csv``
(``t_seconds,variance,db``, curves delimited by the time column
resetting), and overlay crosses from ``points.csv``, whose map
coordinates are the tabulated kappa, epsilon and rho columns combined as
(kappa sqrt(1-epsilon), rho).  A plain ``x,y,label`` points file is also
accepted.

Rendering is deterministic: a pinned style sheet, a fixed SVG hash salt
and no embedded timestamps, so identical inputs yield identical bytes on
a pinned toolchain.
"""

import csv
import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class SchemaError(Exception):
    """CSV header does not match the expected artifact schema."""


class EmptyData(Exception):
    """CSV parsed fine but holds no rows to draw."""


MAP_HEADER = ["x_label", "y_label", "value_db"]
SERIES_HEADER = ["t_seconds", "variance", "db"]
POINTS_HEADER = ["label", "kappa", "epsilon", "eta", "rho", "xi_computed",
                 "db_computed", "xi_paper", "abs_dev"]

STYLE = {
    "figure.figsize": (7.0, 5.0),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 11,
    "font.family": "DejaVu Sans",
    "axes.grid": False,
    "svg.hashsalt": "plotkit-fixed-style-v1",
    "svg.fonttype": "path",
    "path.simplify": False,
}


def _read_rows(path, expected_header):
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise EmptyData(f"{path} is empty")
    header = rows[0]
    for column in expected_header:
        if column not in header:
            raise SchemaError(f"{path}: missing column {column!r} "
                              f"(found {header})")
    if len(rows) == 1:
        raise EmptyData(f"{path} has a header but no data rows")
    index = {name: header.index(name) for name in header}
    return rows[1:], index


def load_map(path):
    rows, idx = _read_rows(path, MAP_HEADER)
    try:
        x = np.array([float(r[idx["x_label"]]) for r in rows])
        y = np.array([float(r[idx["y_label"]]) for r in rows])
        v = np.array([float(r[idx["value_db"]]) for r in rows])
    except (ValueError, IndexError) as exc:
        raise SchemaError(f"{path}: non-numeric map cell ({exc})") from exc
    xs = np.unique(x)
    ys = np.unique(y)
    if xs.size < 2 or ys.size < 2:
        raise EmptyData(f"{path}: map needs at least a 2x2 grid")
    grid = np.full((ys.size, xs.size), np.nan)
    ix = np.searchsorted(xs, x)
    iy = np.searchsorted(ys, y)
    grid[iy, ix] = v
    if np.isnan(grid).any():
        raise SchemaError(f"{path}: grid is not a complete rectangle")
    return xs, ys, grid


def load_series(path):
    """Curves from a concatenated series file; a time reset starts a curve."""
    rows, idx = _read_rows(path, SERIES_HEADER)
    curves = []
    current = []
    previous_t = None
    for r in rows:
        try:
            t = float(r[idx["t_seconds"]])
            var = float(r[idx["variance"]])
            db = float(r[idx["db"]])
        except (ValueError, IndexError) as exc:
            raise SchemaError(f"{path}: non-numeric series cell ({exc})") from exc
        if previous_t is not None and t < previous_t and current:
            curves.append(np.array(current))
            current = []
        current.append((t, var, db))
        previous_t = t
    if current:
        curves.append(np.array(current))
    return curves


def load_points(path):
    """Overlay crosses as (x, y, label) tuples.

    Accepts either the working-point table (kappa, epsilon, rho columns,
    combined into the map coordinates) or a bare x,y,label file.
    """
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise EmptyData(f"{path} is empty")
    header = rows[0]
    if all(c in header for c in ("kappa", "epsilon", "rho", "label")):
        idx = {name: header.index(name) for name in header}
        points = []
        for r in rows[1:]:
            kappa = float(r[idx["kappa"]])
            eps = float(r[idx["epsilon"]])
            points.append((kappa * math.sqrt(1.0 - eps),
                           float(r[idx["rho"]]), r[idx["label"]]))
    elif all(c in header for c in ("x", "y", "label")):
        idx = {name: header.index(name) for name in header}
        points = [(float(r[idx["x"]]), float(r[idx["y"]]), r[idx["label"]])
                  for r in rows[1:]]
    else:
        raise SchemaError(f"{path}: expected kappa/epsilon/rho/label or "
                          f"x/y/label columns (found {header})")
    if not points:
        raise EmptyData(f"{path} has a header but no data rows")
    return points


def _is_geometric(values):
    if values[0] <= 0 or values.size < 3:
        return False
    ratios = values[1:] / values[:-1]
    return float(np.ptp(ratios)) < 1e-6 * float(ratios.mean()) + 1e-9


def _edges(values, log):
    if log:
        inner = np.sqrt(values[1:] * values[:-1])
        first = values[0] ** 2 / inner[0]
        last = values[-1] ** 2 / inner[-1]
    else:
        inner = 0.5 * (values[1:] + values[:-1])
        first = 2 * values[0] - inner[0]
        last = 2 * values[-1] - inner[-1]
    return np.concatenate([[first], inner, [last]])


def _save(fig, out_path):
    metadata = {"Date": None} if str(out_path).endswith(".svg") else None
    fig.savefig(out_path, metadata=metadata)
    plt.close(fig)


def render_heatmap(map_csv, out_path, points_csv=None, value_range=None):
    """Squeezing map with optional working-point crosses."""
    xs, ys, grid = load_map(map_csv)
    points = load_points(points_csv) if points_csv else []
    for x, y, label in points:
        if not (xs.min() <= x <= xs.max() and ys.min() <= y <= ys.max()):
            raise SchemaError(
                f"overlay point {label!r} at ({x:.3g}, {y:.3g}) lies outside "
                f"the map axes")
    y_log = _is_geometric(ys)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        vmin, vmax = value_range if value_range else (grid.min(), grid.max())
        mesh = ax.pcolormesh(_edges(xs, False), _edges(ys, y_log), grid,
                             cmap="viridis", vmin=vmin, vmax=vmax,
                             rasterized=True)
        if y_log:
            ax.set_yscale("log")
        for x, y, label in points:
            ax.plot(x, y, marker="x", markersize=10, markeredgewidth=2.5,
                    color="red")
            ax.annotate(label, (x, y), textcoords="offset points",
                        xytext=(6, 6), color="white", fontsize=9)
        ax.set_xlabel(r"effective coupling $\kappa\sqrt{1-\epsilon}$")
        ax.set_ylabel(r"projection-noise ratio $\varrho$")
        fig.colorbar(mesh, ax=ax, label="two-mode squeezing (dB)")
        fig.tight_layout()
        _save(fig, out_path)
    return out_path


def render_curves(series_csv, out_path):
    """Decay of stored squeezing on a dB scale, one line per curve."""
    curves = load_series(series_csv)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for curve in curves:
            t, _, db = curve[:, 0], curve[:, 1], curve[:, 2]
            ax.plot(t, db, linewidth=2.0,
                    label=f"{db[0]:.0f} dB initial")
        ax.set_xlabel("time (s)")
        ax.set_ylabel("squeezing (dB)")
        ax.set_ylim(bottom=0)
        ax.legend(frameon=False)
        fig.tight_layout()
        _save(fig, out_path)
    return out_path
