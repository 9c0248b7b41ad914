"""
Deterministic file output: trajectory and report CSV, SVG projections and
JSON run manifests.

All writers produce identical bytes for identical inputs: floats use the
round-trip ``.17g`` format, line endings are LF, and nothing time or host
dependent is recorded.
"""
import csv
import io
import json

import numpy as np

from . import __version__
from .errors import AxisOutOfRange
from .geometry import arclength_grid

FLOAT_FORMAT = ".17g"


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def _write_rows(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    data = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
    return data


def trajectory_rows(traj):
    n = traj.dim
    header = (
        ["t", "sample_index", "u", "s"]
        + [f"x{c}" for c in range(1, n + 1)]
        + ["v"]
        + [f"k{i}" for i in range(1, n)]
        + [f"f{i}" for i in range(1, n + 1)]
    )
    rows = []
    for snap in traj.snapshots:
        curve, fd = snap.curve, snap.frenet
        for p in range(curve.m):
            rows.append(
                [snap.t, p, curve.params[p], snap.s[p]]
                + list(curve.samples[p])
                + [fd.speed[p]]
                + list(fd.curvatures[:, p])
                + list(snap.f[:, p])
            )
    return header, rows


def export_trajectory_csv(traj, path=None):
    """One row per (snapshot, sample): t, sample_index, u, s, x1..xn, v, k1..k(n-1), f1..fn.

    Returns the CSV text; writes it to ``path`` when given.
    """
    return _write_rows(path, *trajectory_rows(traj))


def export_report_csv(report, path=None):
    """One row per (identity, variant, norm) of a verification report.

    Convergence studies additionally list their per-level table and orders
    as rows whose norm column is ``level:<i>`` or ``order``.
    """
    header = ["identity", "variant", "norm", "value", "tolerance", "passed"]
    rows = [list(r) for r in report.rows()]
    for i, level in enumerate(report.table):
        for name, value in level.items():
            if name not in ("m", "dt"):
                rows.append([name, f"m={level['m']} dt={_fmt(level['dt'])}", f"level:{i}", value, None, None])
    for name, order in report.orders.items():
        rows.append([name, "-", "order", order, None, None])
    return _write_rows(path, header, rows)


def export_frenet_csv(fd, path=None):
    """Frame and curvatures of a single curve, one row per sample."""
    curve = fd.curve
    n = fd.dim
    s = arclength_grid(curve, fd.speed)
    header = (
        ["sample_index", "u", "s"]
        + [f"x{c}" for c in range(1, n + 1)]
        + ["v"]
        + [f"k{i}" for i in range(1, n)]
        + [f"V{i}_{c}" for i in range(1, n + 1) for c in range(1, n + 1)]
    )
    rows = [
        [p, curve.params[p], s[p]]
        + list(curve.samples[p])
        + [fd.speed[p]]
        + list(fd.curvatures[:, p])
        + list(fd.frames[p].ravel())
        for p in range(curve.m)
    ]
    return _write_rows(path, header, rows)


def export_csv(obj, path=None):
    """Dispatch on trajectories, reports and Frenet data."""
    if hasattr(obj, "snapshots"):
        return export_trajectory_csv(obj, path)
    if hasattr(obj, "residuals"):
        return export_report_csv(obj, path)
    if hasattr(obj, "frames"):
        return export_frenet_csv(obj, path)
    raise TypeError(f"cannot export {type(obj).__name__} as CSV")


def _num(x):
    text = format(float(x), ".6f")
    return "0.000000" if text == "-0.000000" else text


def export_svg_projection(traj, axes=(1, 2), stride=1, path=None, size=480):
    """Polylines of the snapshots projected on two coordinate axes.

    ``axes`` are 1-based coordinate indices.  Every ``stride``-th snapshot and
    the final one are drawn; earlier snapshots are lighter.  The view box
    covers all drawn points with a 5 % margin; the second axis points up.
    """
    n = traj.dim
    if len(axes) != 2 or any(not 1 <= a <= n for a in axes):
        raise AxisOutOfRange(f"axes {tuple(axes)} outside 1..{n}")
    if stride < 1:
        raise ValueError("stride must be at least 1")
    picks = list(range(0, len(traj), stride))
    if picks[-1] != len(traj) - 1:
        picks.append(len(traj) - 1)
    i, j = axes[0] - 1, axes[1] - 1
    lines = []
    for idx in picks:
        curve = traj[idx].curve
        pts = curve.samples[:, [i, j]].copy()
        pts[:, 1] *= -1.0
        if curve.closed and not np.any(curve.shift):
            pts = np.vstack([pts, pts[:1]])
        lines.append(pts)
    allpts = np.vstack(lines)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    lo, span = lo - 0.05 * span, span * 1.1
    width = size
    height = max(1, int(round(size * span[1] / span[0])))
    stroke = 0.004 * max(span)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_num(lo[0])} {_num(lo[1])} {_num(span[0])} {_num(span[1])}">',
        f'<g fill="none" stroke-width="{_num(stroke)}" stroke-linejoin="round">',
    ]
    total = len(picks)
    for rank, (idx, pts) in enumerate(zip(picks, lines)):
        grey = 200 if total == 1 else int(round(200 * (1 - rank / (total - 1))))
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
        out.append(f'<polyline data-t="{_fmt(traj[idx].t)}" stroke="rgb({grey},{grey},{grey})" points="{coords}"/>')
    out += ["</g>", "</svg>", ""]
    data = "\n".join(out)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
    return data


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    return value


def build_manifest(command, scenario, tolerances, outputs=(), results=None, variant=None):
    """Manifest dictionary: scenario echo, tool version, tolerances and produced files."""
    manifest = {
        "tool": "frenetflow",
        "version": __version__,
        "command": command,
        "scenario": scenario,
        "tolerances": tolerances,
        "outputs": sorted(outputs),
    }
    if variant is not None:
        manifest["variant"] = variant
    if results is not None:
        manifest["results"] = results
    return _jsonable(manifest)


def write_manifest(manifest, path=None):
    data = json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
    return data
