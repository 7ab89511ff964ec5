"""CSV, JSON, SVG and manifest writers and their readers."""

from __future__ import annotations

import csv
import json
import math
import platform
from pathlib import Path

import numpy as np

FLOAT_FMT = "{:.17g}"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return FLOAT_FMT.format(float(x))
    if x is None:
        return ""
    return str(x)


def write_csv(path, header, rows) -> None:
    """Write ``rows`` under ``header``; ``path`` may also be an open text stream."""
    if hasattr(path, "write"):
        _write_rows(path, header, rows)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_rows(fh, header, rows)


def _write_rows(fh, header, rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def read_numeric_csv(path) -> tuple[list[str], np.ndarray]:
    header, rows = read_csv(path)
    conv = {"true": 1.0, "false": 0.0, "": math.nan}
    data = np.array([[conv[c] if c in conv else float(c) for c in r] for r in rows], dtype=float)
    return header, data


def write_trajectory(path, traj) -> None:
    if traj.u.ndim == 1:
        header = ["t", "u", "v"]
        rows = zip(traj.times, traj.u, traj.v)
    else:
        n = traj.u.shape[1]
        header = ["t"] + [f"u_{j}" for j in range(n)] + [f"v_{j}" for j in range(n)]
        rows = ([t, *u, *v] for t, u, v in zip(traj.times, traj.u, traj.v))
    write_csv(path, header, rows)


def read_trajectory(path) -> dict:
    header, data = read_numeric_csv(path)
    if header == ["t", "u", "v"]:
        return dict(t=data[:, 0], u=data[:, 1], v=data[:, 2])
    n = (len(header) - 1) // 2
    return dict(t=data[:, 0], u=data[:, 1:1 + n], v=data[:, 1 + n:])


def write_diagnostics(path, traj) -> None:
    V = traj.V if traj.V is not None else [None] * len(traj.times)
    write_csv(path, ["t", "dist_sup", "in_rect", "V"],
              zip(traj.times, traj.dist_sup, traj.in_rect, V))


def read_diagnostics(path) -> dict:
    header, data = read_numeric_csv(path)
    return {h: data[:, j] for j, h in enumerate(header)}


def jsonable(obj):
    """Recursively convert numpy scalars/arrays and non-finite floats
    (-> None) into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False)


def write_manifest(path, cfg, verdicts: dict, files: list[str]) -> dict:
    from . import __version__

    doc = dict(
        config_sha256=cfg.sha256,
        config_path=cfg.path,
        versions=dict(rdstab=__version__, numpy=np.__version__, python=platform.python_version()),
        verdicts=verdicts,
        files=sorted(files),
    )
    Path(path).write_text(dumps(doc) + "\n", encoding="utf-8")
    return doc


def svg_lines(series: list[tuple[str, np.ndarray, np.ndarray, str]], title: str,
              xlabel: str, width: int = 640, height: int = 400) -> str:
    """Minimal standalone SVG line plot; ``series`` items are
    (label, x, y, colour)."""
    pad = 50
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             '<rect width="100%" height="100%" fill="white"/>',
             f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
             f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
             f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">{xlabel}</text>',
             f'<text x="{pad - 4}" y="{height - pad}" text-anchor="end" font-size="10">{y0:.4g}</text>',
             f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="10">{y1:.4g}</text>',
             f'<text x="{pad}" y="{height - pad + 14}" text-anchor="middle" font-size="10">{x0:.4g}</text>',
             f'<text x="{width - pad}" y="{height - pad + 14}" text-anchor="middle" font-size="10">{x1:.4g}</text>']
    for j, (label, x, y, colour) in enumerate(series):
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{width - pad - 4}" y="{pad + 14 * (j + 1)}" text-anchor="end" '
                     f'font-size="12" fill="{colour}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
