"""SVG output: tilings, arrow decorations, covering overlays, diffraction disks."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .patch import Patch

FILLS = {
    "square": "#f2d7a6",
    "rhomb": "#a9c8e8",
    "triangle": "#f2d7a6",
    "thick": "#a9c8e8",
    "thin": "#f2d7a6",
    "large": "#a9c8e8",
    "small": "#f2d7a6",
    "A": "#a9c8e8",
    "B": "#f2d7a6",
}


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _header(width: float, height: float, view: tuple, background: str | None = None) -> list[str]:
    x0, y0, w, h = view
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">',
    ]
    if background:
        out.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(w)}" height="{_fmt(h)}" fill="{background}"/>')
    return out


def _xy(patch: Patch) -> np.ndarray:
    from .cutproject import cartesian_matrix

    if patch.dim == 1:
        pts = patch.float_points()
        return np.hstack([pts, np.zeros((len(pts), 1))])
    return patch.float_points(cartesian_matrix(patch))


def render_patch(patch: Patch, overlays: Sequence = (), size: float = 800.0, arrows: bool = True) -> str:
    """Thin tile outlines, optional arrows, heavy overlay polygons (covering clusters)."""
    xy = _xy(patch)
    if len(xy) == 0:
        return "\n".join(_header(size, size, (-1, -1, 2, 2)) + ["</svg>", ""])
    # SVG y grows downwards
    xy = xy * np.array([1.0, -1.0])
    lo, hi = xy.min(axis=0) - 0.5, xy.max(axis=0) + 0.5
    span = hi - lo
    scale = size / max(span.max(), 1e-9)
    lines = _header(span[0] * scale, span[1] * scale, (lo[0], lo[1], span[0], span[1]))
    sw = _fmt(0.02 * max(span.max() / 40, 1))
    lines.append(f'<g stroke="#333" stroke-width="{sw}" stroke-linejoin="round">')
    if patch.dim == 1:
        for t in patch.tiles:
            a, b = xy[t.vertices[0]], xy[t.vertices[1]]
            lines.append(
                f'<line x1="{_fmt(a[0])}" y1="0" x2="{_fmt(b[0])}" y2="0" '
                f'stroke="{FILLS.get(t.type, "#ccc")}" stroke-width="0.3"/>'
            )
    else:
        for t in patch.tiles:
            pts = " ".join(f"{_fmt(xy[v][0])},{_fmt(xy[v][1])}" for v in t.vertices)
            lines.append(f'<polygon points="{pts}" fill="{FILLS.get(t.type, "#ddd")}"/>')
    lines.append("</g>")
    if arrows and patch.dim == 2:
        lines.extend(_arrows(patch, xy))
    if overlays:
        lines.append(f'<g fill="none" stroke="#000" stroke-width="{_fmt(float(sw) * 4)}">')
        for poly in overlays:
            p = np.asarray(poly, dtype=float) * np.array([1.0, -1.0])
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in p)
            lines.append(f'<polygon points="{pts}"/>')
        lines.append("</g>")
    lines += ["</svg>", ""]
    return "\n".join(lines)


def _arrows(patch: Patch, xy: np.ndarray) -> list[str]:
    out = ['<g fill="none" stroke="#b00" stroke-width="0.03">']
    done = set()
    for t in patch.tiles:
        if t.decoration is None:
            continue
        k = len(t.vertices)
        for i, dec in enumerate(t.decoration):
            if dec is None:
                continue
            a, b = t.vertices[i], t.vertices[(i + 1) % k]
            key = (min(a, b), max(a, b))
            if key in done:
                continue
            done.add(key)
            kind, direction = dec
            p, q = (xy[a], xy[b]) if direction > 0 else (xy[b], xy[a])
            d = q - p
            ln = math.hypot(*d)
            u = d / ln
            nrm = np.array([-u[1], u[0]])
            for j in range(kind):
                tip = (p + q) / 2 + u * (0.08 - 0.1 * j)
                left = tip - 0.1 * u + 0.07 * nrm
                right = tip - 0.1 * u - 0.07 * nrm
                out.append(
                    f'<polyline points="{_fmt(left[0])},{_fmt(left[1])} {_fmt(tip[0])},{_fmt(tip[1])} '
                    f'{_fmt(right[0])},{_fmt(right[1])}"/>'
                )
    out.append("</g>")
    return out


def cluster_polygons(patch: Patch, placements, clusters) -> list[np.ndarray]:
    """Cartesian polygons of covering placements, for ``render_patch`` overlays."""
    from .cutproject import cartesian_matrix
    from .exactnum import to_float

    by_name = {c.name: c for c in clusters}
    cart = cartesian_matrix(patch)
    polys = []
    for pl in placements:
        poly = by_name[pl.cluster].polygon(pl.center, pl.orientation)
        polys.append(np.array([cart @ np.array([to_float(x) for x in p]) for p in poly]))
    return polys


def render_pattern(pattern, size: float = 800.0) -> str:
    """Diffraction peaks as white disks on black, disk area proportional to intensity."""
    k_max = pattern.k_max
    view = (-k_max * 1.05, -k_max * 1.05, 2.1 * k_max, 2.1 * k_max)
    lines = _header(size, size, view, background="#000")
    rmax = 0.06 * k_max
    lines.append('<g fill="#fff">')
    for p in pattern.peaks:
        r = rmax * math.sqrt(max(p.intensity, 0.0))
        lines.append(f'<circle cx="{_fmt(p.k_par[0])}" cy="{_fmt(-p.k_par[1])}" r="{r:.4f}"/>')
    lines += ["</g>", "</svg>", ""]
    return "\n".join(lines)
