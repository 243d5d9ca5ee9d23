"""Bragg peaks of cut-and-project point sets.

With the combined map ``P`` (lattice coordinates -> Cartesian E_par + E_perp),
reciprocal vectors are ``k = P^-T m`` for integer ``m``. For a point
``x = P (z + s)`` of a class with shift ``s`` one has ``k . x = m . s`` mod 1,
so the average of ``exp(-2 pi i k_par . x_par)`` over the point set is

    sum_c exp(-2 pi i m . s_c) * FT_c(-k_perp) / sum_c area(W_c)

where ``FT(k) = int_W exp(-2 pi i k . y) dy``. Intensities are reported
relative to the origin peak. A common window offset only adds a phase.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .cutproject import CutProjectSpec, Window
from .patch import Patch

PATTERN_SCHEMA = "quasitile.diffraction/1"
TAYLOR_THRESHOLD = 1.0  # in |q| * diameter
SERIES_TERMS = 30


# ---------------------------------------------------------------------------
# polygon Fourier transform
# ---------------------------------------------------------------------------


def _sinc(u: np.ndarray) -> np.ndarray:
    out = np.ones_like(u)
    nz = np.abs(u) > 1e-8
    out[nz] = np.sin(u[nz]) / u[nz]
    small = ~nz
    out[small] = 1 - u[small] ** 2 / 6
    return out


def _edge_ft(v: np.ndarray, q: np.ndarray) -> np.ndarray:
    # divergence theorem: F(q) = (i / |q|^2) sum_j (q x e_j) exp(-i q . mid_j) sinc(q . e_j / 2)
    b = np.roll(v, -1, axis=0)
    e = b - v
    mid = (v + b) / 2
    qxe = q[:, 0:1] * e[None, :, 1] - q[:, 1:2] * e[None, :, 0]
    phase = np.exp(-1j * (q @ mid.T))
    s = _sinc((q @ e.T) / 2)
    return 1j * (qxe * phase * s).sum(axis=1) / (q**2).sum(axis=1)


def _series_ft(v: np.ndarray, q: np.ndarray, terms: int = SERIES_TERMS) -> np.ndarray:
    # fan of triangles (c, v_j, v_j+1) about the centroid c; for a triangle with
    # corners 0, u, w:  int exp(-i q . y) dy = 2 A sum_n (-i)^n h_n(q.u, q.w) / (n+2)!
    # where h_n(x, y) = sum_{j<=n} x^j y^(n-j)
    c = v.mean(axis=0)
    u = v - c
    w = np.roll(u, -1, axis=0)
    area2 = u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0]
    x, y = q @ u.T, q @ w.T
    h = np.ones_like(x)
    ypow = np.ones_like(y)
    total = h / 2
    fact = 2.0
    for n in range(1, terms):
        ypow = ypow * y
        h = x * h + ypow
        fact *= n + 2
        total = total + ((-1j) ** n / fact) * h
    return np.exp(-1j * (q @ c)) * (total * area2).sum(axis=1)


def polygon_ft(vertices: np.ndarray, k: np.ndarray) -> np.ndarray:
    """int_P exp(-2 pi i k . y) dy for a convex polygon (ccw Cartesian vertices).

    With q = 2 pi k the edge sum from the divergence theorem is used when
    |q| * diameter >= ``TAYLOR_THRESHOLD``; below it that sum cancels badly
    and a power series in q (exact to double precision there) is used.
    """
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        raise ValueError("degenerate polygon")
    k = np.atleast_2d(np.asarray(k, dtype=float))
    b = np.roll(v, -1, axis=0)
    area = (v[:, 0] * b[:, 1] - v[:, 1] * b[:, 0]).sum() / 2
    if area <= 0:
        raise ValueError("polygon must be non-degenerate and ccw")
    diam = float(np.sqrt(((v[:, None, :] - v[None, :, :]) ** 2).sum(axis=2)).max())
    q = 2 * math.pi * k
    out = np.empty(len(q), dtype=complex)
    small = np.sqrt((q**2).sum(axis=1)) * diam < TAYLOR_THRESHOLD
    if np.any(small):
        out[small] = _series_ft(v, q[small])
    if np.any(~small):
        out[~small] = _edge_ft(v, q[~small])
    return out


def _window_cartesian(window: Window, frame) -> np.ndarray:
    fv = window.polygon.float_vertices()
    cart = fv @ frame.basis_matrix().T
    area2 = np.sum(cart[:, 0] * np.roll(cart[:, 1], -1) - np.roll(cart[:, 0], -1) * cart[:, 1])
    return cart if area2 > 0 else cart[::-1]


def window_ft(window: Window, k_perp, frame=None) -> complex | np.ndarray:
    """Window transform at Cartesian internal wave vector(s); value at 0 is the area."""
    from .geometry import cartesian_frame

    frame = frame or cartesian_frame(2, 2)
    out = polygon_ft(_window_cartesian(window, frame), k_perp)
    return out[0] if np.ndim(k_perp) == 1 else out


# ---------------------------------------------------------------------------
# peaks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BraggPeak:
    indices: tuple
    k_par: tuple
    k_perp: tuple
    intensity: float

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "k_par": [round(x, 12) for x in self.k_par],
            "k_perp": [round(x, 12) for x in self.k_perp],
            "intensity": float(f"{self.intensity:.12e}"),
        }


@dataclass
class DiffractionPattern:
    scheme: str
    peaks: list
    cutoff: float
    k_max: float
    normalization: str = "intensity relative to the origin peak"
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": PATTERN_SCHEMA,
            "scheme": self.scheme,
            "cutoff": self.cutoff,
            "k_max": self.k_max,
            "normalization": self.normalization,
            "peaks": [p.to_dict() for p in self.peaks],
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def strongest(self, count: int, include_origin: bool = False) -> list[BraggPeak]:
        peaks = [p for p in self.peaks if include_origin or any(self.nonzero(p))]
        return sorted(peaks, key=lambda p: (-p.intensity, p.indices))[:count]

    @staticmethod
    def nonzero(p: BraggPeak) -> tuple:
        return tuple(x for x in p.indices if x != 0)


@dataclass
class _Geometry:
    pcart: np.ndarray  # combined map, Cartesian, n x n
    recip: np.ndarray  # reciprocal basis as columns: k = recip @ m
    m: int  # physical dimension
    windows: list  # (shift array, Cartesian polygon)


def _geometry(spec: CutProjectSpec) -> _Geometry:
    s = spec.scheme
    bpar = s.par_frame.basis_matrix()
    bperp = s.perp_frame.basis_matrix()
    pcart = np.vstack([bpar @ s.par_matrix, bperp @ s.perp_matrix])
    recip = np.linalg.inv(pcart).T
    wins = []
    for label in sorted(spec.windows):
        shift, win = spec.windows[label]
        wins.append((np.array([float(x) for x in shift]), _window_cartesian(win, s.perp_frame)))
    return _Geometry(pcart, recip, s.m, wins)


def amplitudes(spec: CutProjectSpec, m_list: np.ndarray) -> np.ndarray:
    """Complex amplitudes (origin normalised to 1) for reciprocal coordinates m."""
    g = _geometry(spec)
    m_arr = np.atleast_2d(np.asarray(m_list, dtype=float))
    k = m_arr @ g.recip.T
    kperp = k[:, g.m :]
    total = np.zeros(len(m_arr), dtype=complex)
    area = 0.0
    for shift, poly in g.windows:
        phase = np.exp(-2j * math.pi * (m_arr @ shift))
        total += phase * polygon_ft(poly, -kperp)
        area += polygon_ft(poly, np.zeros((1, kperp.shape[1])))[0].real
    return total / area


def _perimeter(poly: np.ndarray) -> float:
    return float(np.sqrt(((np.roll(poly, -1, axis=0) - poly) ** 2).sum(axis=1)).sum())


def perp_bound(spec: CutProjectSpec, cutoff: float) -> float:
    """|k_perp| beyond which every relative intensity is below ``cutoff``.

    From the edge sum, |FT(k)| <= perimeter / (2 pi |k|).
    """
    g = _geometry(spec)
    per = sum(_perimeter(p) for _, p in g.windows)
    area = sum(polygon_ft(p, np.zeros((1, 2)))[0].real for _, p in g.windows)
    return per / (2 * math.pi * area * math.sqrt(cutoff))


def predict_peaks(spec: CutProjectSpec, cutoff: float = 1e-3, k_max: float = 2.0) -> DiffractionPattern:
    """All peaks with |k_par| <= k_max and relative intensity >= cutoff."""
    if not 0 < cutoff <= 1:
        raise ValueError("cutoff must lie in (0, 1]")
    if k_max <= 0:
        raise ValueError("k_max must be positive")
    g = _geometry(spec)
    n = g.pcart.shape[0]
    kp = perp_bound(spec, cutoff)
    radius2 = k_max**2 + kp**2
    gram = g.recip.T @ g.recip
    ginv = np.linalg.inv(gram)
    bounds = [int(math.floor(math.sqrt(radius2 * ginv[i, i]) + 1e-9)) for i in range(n)]
    axes = [np.arange(-b, b + 1) for b in bounds]
    grid = np.stack([x.ravel() for x in np.meshgrid(*axes, indexing="ij")], axis=1)
    k = grid @ g.recip.T
    kpar, kperp = k[:, : g.m], k[:, g.m :]
    keep = ((kpar**2).sum(axis=1) <= k_max**2 * (1 + 1e-12)) & ((kperp**2).sum(axis=1) <= kp**2)
    grid, kpar, kperp = grid[keep], kpar[keep], kperp[keep]
    amp = amplitudes(spec, grid)
    inten = np.abs(amp) ** 2
    sel = inten >= cutoff
    peaks = [
        BraggPeak(tuple(int(x) for x in mm), tuple(float(x) for x in a), tuple(float(x) for x in b), float(i))
        for mm, a, b, i in zip(grid[sel], kpar[sel], kperp[sel], inten[sel])
    ]
    peaks.sort(key=lambda p: (-round(p.intensity, 9), p.indices))
    return DiffractionPattern(spec.scheme.name, peaks, cutoff, k_max, meta={"perp_bound": kp})


def orbit_spread(spec: CutProjectSpec, pattern: DiffractionPattern) -> float:
    """Largest relative intensity difference along orbits of the point group."""
    gen = np.array(spec.scheme.generator.generators[0], dtype=float)
    # the group acts on reciprocal coordinates by the inverse transpose
    act = np.linalg.inv(gen).T
    order = spec.scheme.generator.order_hint or 1
    worst = 0.0
    for p in pattern.peaks:
        m = np.array(p.indices, dtype=float)
        orbit = [m]
        for _ in range(order - 1):
            orbit.append(act @ orbit[-1])
        inten = np.abs(amplitudes(spec, np.round(np.array(orbit)))) ** 2
        worst = max(worst, float((inten.max() - inten.min()) / inten.max()))
    return worst


def predicted_density(spec: CutProjectSpec) -> float:
    """Points per unit physical area: window area over lattice covolume."""
    g = _geometry(spec)
    area = sum(polygon_ft(p, np.zeros((1, 2)))[0].real for _, p in g.windows)
    return area / abs(np.linalg.det(g.pcart))


# ---------------------------------------------------------------------------
# direct sums
# ---------------------------------------------------------------------------


def direct_pattern(patch: Patch, k_list) -> np.ndarray:
    """|N^-1 sum_x exp(-2 pi i k . x)|^2 over patch vertices (Cartesian k)."""
    from .cutproject import cartesian_matrix

    if not patch.points:
        raise ValueError("empty patch")
    xy = patch.float_points(cartesian_matrix(patch))
    k = np.atleast_2d(np.asarray(k_list, dtype=float))
    out = np.empty(len(k))
    for lo in range(0, len(k), 64):
        ph = np.exp(-2j * math.pi * (xy @ k[lo : lo + 64].T))
        out[lo : lo + 64] = np.abs(ph.mean(axis=0)) ** 2
    return out


def compare_with_direct(pattern: DiffractionPattern, patch: Patch, count: int = 10) -> list[dict]:
    """Predicted vs measured intensity for the strongest non-origin peaks."""
    peaks = pattern.strongest(count)
    measured = direct_pattern(patch, [p.k_par for p in peaks])
    return [
        {
            "indices": list(p.indices),
            "predicted": p.intensity,
            "direct": float(d),
            "relative_error": abs(float(d) - p.intensity) / p.intensity,
        }
        for p, d in zip(peaks, measured)
    ]


def unit_cell_indices(n: int, bound: int) -> list[tuple]:
    return [t for t in itertools.product(range(-bound, bound + 1), repeat=n)]
