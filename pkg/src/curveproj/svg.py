"""SVG overlay of C2 against a projected C1, drawn in an in-plane chart."""
from __future__ import annotations

import numpy as np

from .curves import CurveParam
from .errors import PlaneMismatch
from .geometry import Plane
from .numeric import NumCurve, param_chart

_AXES = (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), np.array([0.0, 0.0, 1.0]))


def plane_chart(plane: Plane):
    """(origin, e1, e2): orthonormal in-plane basis by Gram-Schmidt on x, y, z."""
    n = np.array([float(v) for v in plane.normal])
    d = float(plane.D)
    nn = n @ n
    origin = -d * n / nn
    n = n / np.sqrt(nn)
    e1 = None
    for ax in _AXES:
        v = ax - (ax @ n) * n
        if np.linalg.norm(v) > 1e-6:
            e1 = v / np.linalg.norm(v)
            break
    e2 = np.cross(n, e1)
    return origin, e1, e2


def _as_num(c):
    return NumCurve.from_curve(c) if isinstance(c, CurveParam) else c


def _chart_points(c: NumCurve, plane: Plane, samples: int):
    u = -1.0 + (2.0 * np.arange(samples) + 1.0) / samples
    pts = c.eval(param_chart(u))
    origin, e1, e2 = plane_chart(plane)
    n = np.array([float(v) for v in plane.normal])
    n = n / np.linalg.norm(n)
    finite = np.all(np.isfinite(pts), axis=1)
    q = np.where(finite[:, None], pts, 0.0) - origin
    off = np.abs(q @ n)
    scale = np.maximum(1.0, np.linalg.norm(q, axis=1))
    if np.any(off[finite] > 1e-6 * scale[finite]):
        raise PlaneMismatch("curve does not lie in the plot plane")
    xy = np.stack([q @ e1, q @ e2], axis=1)
    return xy, finite


def default_window(c2, plane: Plane, samples: int = 512, margin: float = 0.05):
    xy, ok = _chart_points(_as_num(c2), plane, samples)
    xy = xy[ok]
    if not len(xy):
        return (-1.0, -1.0, 1.0, 1.0)
    lo = np.percentile(xy, 2, axis=0)
    hi = np.percentile(xy, 98, axis=0)
    span = np.maximum(hi - lo, 1e-9)
    lo = lo - margin * span
    hi = hi + margin * span
    return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))


def _paths(xy, ok, window):
    x0, y0, x1, y1 = window
    w, h = x1 - x0, y1 - y0
    far = (np.abs(xy[:, 0] - (x0 + x1) / 2) > 50 * w) | (np.abs(xy[:, 1] - (y0 + y1) / 2) > 50 * h)
    good = ok & ~far
    runs, cur = [], []
    for k in range(len(xy)):
        if good[k]:
            cur.append(xy[k])
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    out = []
    for run in runs:
        if len(run) < 2:
            continue
        # flip y so the chart's second axis points up
        out.append(" ".join(f"{p[0]:.6g},{-p[1]:.6g}" for p in run))
    return out


def emit_svg_plot(c2, projected, plane: Plane, window=None, samples: int = 1024, title: str = "") -> str:
    """Two polyline groups: class "c2" for C2 and class "proj" for the projected C1."""
    a, b = _as_num(c2), _as_num(projected)
    if window is None:
        window = default_window(a, plane)
    x0, y0, x1, y1 = window
    if not (x1 > x0 and y1 > y0):
        raise ValueError("window must have positive width and height")
    xa, oka = _chart_points(a, plane, samples)
    xb, okb = _chart_points(b, plane, samples)
    w, h = x1 - x0, y1 - y0
    stroke = max(w, h) / 400.0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{x0:.6g} {-y1:.6g} {w:.6g} {h:.6g}">',
        "<style>.c2{fill:none;stroke:#1f4fd8;stroke-width:%.6g}.proj{fill:none;stroke:#d8321f;stroke-width:%.6g;stroke-dasharray:%.6g}</style>"
        % (2 * stroke, stroke, 4 * stroke),
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    for cls, xy, ok in (("c2", xa, oka), ("proj", xb, okb)):
        lines.append(f'<g class="{cls}">')
        for pts in _paths(xy, ok, window):
            lines.append(f'<polyline class="{cls}" points="{pts}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
