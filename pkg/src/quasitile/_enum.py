"""Complete enumeration of model-set points with exact acceptance.

Coordinates of a lattice point are split as ``p = (u, v)`` where the
perpendicular block ``D`` of the ``v`` coordinates is invertible. Then
``v = D^-1 (y - C u)`` for the internal image ``y`` and the physical image
is ``S u + B D^-1 y`` with the Schur complement ``S = A - B D^-1 C``. Both
the physical region and the window are bounded, so interval bounds on ``u``
and, per ``u``, on ``v`` give a finite candidate set that provably contains
every accepted point. Candidates are screened in floating point; anything
within ``EPS`` of a window edge or the radius is re-decided exactly.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import Scalar, sign, to_float
from .geometry import ConvexRegion

EPS = 1e-7
MARGIN = 1e-6


def _split(scheme):
    n, k = scheme.n, scheme.n - scheme.m
    perp = scheme.perp_matrix
    par = scheme.par_matrix
    best = None
    for v_idx in itertools.combinations(range(n), k):
        u_idx = [j for j in range(n) if j not in v_idx]
        d_blk = perp[:, v_idx]
        if abs(np.linalg.det(d_blk)) < 1e-9:
            continue
        d_inv = np.linalg.inv(d_blk)
        s_blk = par[:, u_idx] - par[:, v_idx] @ d_inv @ perp[:, u_idx]
        if abs(np.linalg.det(s_blk)) < 1e-9:
            continue
        cond = np.linalg.cond(s_blk) * np.linalg.cond(d_blk)
        if best is None or cond < best[0]:
            best = (cond, list(u_idx), list(v_idx), d_inv, s_blk)
    if best is None:
        raise ValueError("projection scheme admits no usable coordinate split")
    return best[1:]


def _float_point(p: Sequence[Scalar]) -> np.ndarray:
    return np.array([to_float(x) for x in p], dtype=float)


def enumerate_points(
    scheme,
    window: ConvexRegion,
    offset: Sequence[Scalar],
    par_lo: Sequence[float],
    par_hi: Sequence[float],
    shift: Sequence[Fraction] | None = None,
    policy: str = "halfopen",
) -> np.ndarray:
    """Integer vectors z with perp(z + shift) in offset + window.

    The physical image of ``z + shift`` is required to lie in the (float)
    frame-coordinate box ``[par_lo, par_hi]``; callers apply their own exact
    physical filter afterwards. Returns an int64 array of shape (N, n).
    """
    n, m = scheme.n, scheme.m
    shift_f = np.zeros(n) if shift is None else np.array([float(x) for x in shift])
    u_idx, v_idx, d_inv, s_blk = _split(scheme)
    perp = scheme.perp_matrix
    par = scheme.par_matrix
    c_blk = perp[:, u_idx]
    b_blk = par[:, v_idx]
    s_inv = np.linalg.inv(s_blk)
    win = window.translate(tuple(offset))
    wverts = win.float_vertices()  # (k, n - m)

    # bounds on p_u = u + shift_u
    t2 = s_inv @ b_blk @ d_inv
    lo = np.asarray(par_lo, dtype=float)
    hi = np.asarray(par_hi, dtype=float)
    pos, neg = np.clip(s_inv, 0, None), np.clip(s_inv, None, 0)
    u_lo = pos @ lo + neg @ hi
    u_hi = pos @ hi + neg @ lo
    ty = wverts @ t2.T  # (k, m)
    u_lo = u_lo - ty.max(axis=0) - MARGIN
    u_hi = u_hi - ty.min(axis=0) + MARGIN
    su = shift_f[u_idx]
    ranges = [
        np.arange(math.ceil(a - s), math.floor(b - s) + 1) for a, b, s in zip(u_lo, u_hi, su)
    ]
    if any(len(r) == 0 for r in ranges):
        return np.zeros((0, n), dtype=np.int64)
    grid = np.stack([g.ravel() for g in np.meshgrid(*ranges, indexing="ij")], axis=1)
    pu = grid + su
    # coarse physical filter on the u part: S p_u = x - B D^-1 y
    # per-u bounds on p_v = D^-1 y - D^-1 C p_u
    dy = wverts @ d_inv.T  # (k, n - m)
    base = -(pu @ (d_inv @ c_blk).T)
    sv = shift_f[v_idx]
    v_lo = np.ceil(base + dy.min(axis=0) - MARGIN - sv).astype(np.int64)
    v_hi = np.floor(base + dy.max(axis=0) + MARGIN - sv).astype(np.int64)
    width = (v_hi - v_lo + 1).max(axis=0) if len(v_lo) else np.zeros(n - m, dtype=np.int64)
    width = np.maximum(width, 0)
    if np.any(width == 0):
        return np.zeros((0, n), dtype=np.int64)
    offs = np.stack(
        [g.ravel() for g in np.meshgrid(*[np.arange(w) for w in width], indexing="ij")], axis=1
    )
    cand_v = v_lo[:, None, :] + offs[None, :, :]
    ok = np.all(cand_v <= v_hi[:, None, :], axis=2)
    u_rep = np.broadcast_to(grid[:, None, :], cand_v.shape[:2] + (m,))
    z = np.zeros(cand_v.shape[:2] + (n,), dtype=np.int64)
    z[..., u_idx] = u_rep
    z[..., v_idx] = cand_v
    z = z[ok]
    if len(z) == 0:
        return z
    p = z + shift_f
    x = p @ par.T
    in_box = np.all((x >= lo - MARGIN) & (x <= hi + MARGIN), axis=1)
    z, p = z[in_box], p[in_box]
    return _window_filter(scheme, win, z, p, shift, policy)


def _window_filter(scheme, win: ConvexRegion, z, p, shift, policy) -> np.ndarray:
    if len(z) == 0:
        return z
    y = p @ scheme.perp_matrix.T
    cons = win.constraints()
    vals = np.stack(
        [y @ np.array([to_float(c) for c in con.coeffs]) + to_float(con.const) for con in cons],
        axis=1,
    )
    # normalise so EPS is a distance-like tolerance
    scale = np.array([max(1.0, float(np.abs([to_float(c) for c in con.coeffs]).sum())) for con in cons])
    vals = vals / scale
    sure_in = np.all(vals > EPS, axis=1)
    sure_out = np.any(vals < -EPS, axis=1)
    unsure = ~sure_in & ~sure_out
    keep = sure_in.copy()
    for i in np.nonzero(unsure)[0]:
        pt = _exact_point(z[i], shift)
        keep[i] = win.contains(scheme.perp(pt), policy)
    return z[keep]


def _exact_point(zrow, shift) -> tuple:
    if shift is None:
        return tuple(int(x) for x in zrow)
    return tuple(int(x) + Fraction(s) for x, s in zip(zrow, shift))


def radius_filter(scheme, z: np.ndarray, radius, shift=None, center=None) -> np.ndarray:
    """Keep points whose physical image lies in the closed disk of the given radius."""
    if len(z) == 0:
        return z
    shift_f = np.zeros(scheme.n) if shift is None else np.array([float(s) for s in shift])
    x = (z + shift_f) @ scheme.par_matrix.T
    cart = x @ scheme.par_frame.basis_matrix().T
    if center is not None:
        cart = cart - scheme.par_frame.to_cartesian(center)
    r = float(radius)
    dist = np.sqrt((cart**2).sum(axis=1))
    keep = dist < r - EPS
    unsure = np.nonzero(np.abs(dist - r) <= EPS)[0]
    r2 = Fraction(radius) ** 2 if not hasattr(radius, "d") else radius * radius
    for i in unsure:
        pt = scheme.par(_exact_point(z[i], shift))
        if center is not None:
            pt = tuple(a - b for a, b in zip(pt, center))
        keep[i] = sign(scheme.par_frame.norm2(pt) - r2) <= 0
    return z[keep]


def disk_box(scheme, radius: float, center=None) -> tuple[np.ndarray, np.ndarray]:
    """Frame-coordinate box containing the Euclidean disk of the given radius."""
    b = scheme.par_frame.coords_bound(float(radius)) + MARGIN
    c = np.zeros(scheme.m) if center is None else _float_point(center)
    return c - b, c + b


def model_set_in_disk(scheme, window, offset, radius, shift=None, policy="halfopen", center=None):
    lo, hi = disk_box(scheme, radius, center)
    z = enumerate_points(scheme, window, offset, lo, hi, shift, policy)
    z = radius_filter(scheme, z, radius, shift, center)
    return z[np.lexsort(z.T[::-1])] if len(z) else z
