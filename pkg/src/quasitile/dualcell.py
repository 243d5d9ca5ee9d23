"""Voronoi and Delone complexes of a lattice, product tiles and section tilings.

All polytopes live in lattice coordinates with exact rational vertices; the
metric is the lattice Gram matrix. Faces of the Voronoi cell ``V_0`` are
found as the closure under intersection of the facet vertex sets. A face
``F`` is shared by the cells of the lattice points ``S_F`` equidistant from
a relative-interior point of ``F``; the convex hull of ``S_F`` is the dual
boundary, a face of the Delone complex.

A section tiling keeps the projected face ``(F + t)_par`` whenever the
internal offset ``c`` lies in ``(X*_F + t)_perp`` (kind ``T``), or with the
roles of the two complexes swapped (kind ``T*``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import linalg
from ._enum import MARGIN, enumerate_points
from .exactnum import Scalar, as_scalar, sign, to_float
from .geometry import (
    ConvexRegion,
    box_region,
    clip_convex,
    polygon_area,
    vadd,
)
from .lattice import EmbeddedLattice, ProjectionScheme
from .patch import Patch, Tile

MAX_DIM = 4

# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VoronoiDomain:
    lattice: EmbeddedLattice
    center: tuple
    relevant: tuple  # relevant vectors t' (integer lattice coordinates)
    vertices: tuple  # exact lattice coordinates (absolute)

    @property
    def facet_normals(self) -> tuple:
        return self.relevant

    def contains(self, x: Sequence[Scalar]) -> bool:
        rel = [Fraction(a) - c for a, c in zip(x, self.center)]
        for r in self.relevant:
            if self.lattice.inner(rel, r) > Fraction(self.lattice.inner(r, r), 2):
                return False
        return True

    def translate(self, t: Sequence[int]) -> VoronoiDomain:
        return VoronoiDomain(
            self.lattice,
            tuple(Fraction(a) + b for a, b in zip(self.center, t)),
            self.relevant,
            tuple(tuple(a + b for a, b in zip(v, t)) for v in self.vertices),
        )

    def reflect(self) -> VoronoiDomain:
        """Image under x -> 2 center - x."""
        c = self.center
        verts = tuple(tuple(2 * ci - a for a, ci in zip(v, c)) for v in self.vertices)
        return VoronoiDomain(self.lattice, c, self.relevant, verts)


@dataclass(frozen=True)
class PBoundary:
    dim: int
    vertices: tuple  # exact lattice coordinates
    incident_centers: tuple  # S_F, integer lattice coordinates

    def translate(self, t: Sequence[int]) -> PBoundary:
        return PBoundary(
            self.dim,
            tuple(tuple(a + b for a, b in zip(v, t)) for v in self.vertices),
            tuple(tuple(a + b for a, b in zip(s, t)) for s in self.incident_centers),
        )


@dataclass(frozen=True)
class DualBoundary:
    vertices: tuple
    dim: int
    boundary: PBoundary


@dataclass(frozen=True)
class DeloneCell:
    hole: tuple  # Voronoi vertex, exact lattice coordinates
    hole_class: tuple  # hole coordinates mod 1
    vertices: tuple  # incident lattice points


@dataclass(frozen=True)
class ProductTile:
    kind: str  # "T" or "T*"
    index: int
    boundary: PBoundary  # Voronoi face
    dual: DualBoundary
    par_vertices: tuple  # lattice-coordinate vertices of the physical factor
    parallel_factor: ConvexRegion
    perp_factor: ConvexRegion
    shape: int = 0  # index of the congruence class of the physical factor

    def volume(self) -> Scalar:
        return self.parallel_factor.measure() * self.perp_factor.measure()


class SingularOffsetError(ValueError):
    """The section plane meets a tile boundary of deficient dimension."""

    def __init__(self, message: str, suggestion):
        super().__init__(message)
        self.suggestion = suggestion


# ---------------------------------------------------------------------------
# Voronoi cell
# ---------------------------------------------------------------------------


def _check_dim(lattice: EmbeddedLattice) -> None:
    if lattice.dimension > MAX_DIM:
        raise ValueError(
            f"unsupported dimension {lattice.dimension}; at most {MAX_DIM} is supported"
        )


def _gram_f(lattice) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in lattice.gram])


def shell_vectors(lattice: EmbeddedLattice, bound: Fraction) -> list[tuple]:
    """All nonzero lattice vectors (integer coordinates) with squared norm <= bound."""
    g = _gram_f(lattice)
    ginv = np.linalg.inv(g)
    n = lattice.dimension
    lim = [int(math.floor(math.sqrt(float(bound) * ginv[i, i]) + 1e-9)) for i in range(n)]
    grids = np.meshgrid(*[np.arange(-k, k + 1) for k in lim], indexing="ij")
    z = np.stack([x.ravel() for x in grids], axis=1)
    norms = np.einsum("ij,jk,ik->i", z, g, z)
    z = z[(norms <= float(bound) + 1e-9) & np.any(z != 0, axis=1)]
    out = []
    for row in z:
        t = tuple(int(x) for x in row)
        if lattice.inner(t, t) <= bound:
            out.append(t)
    return out


def relevant_vectors(lattice: EmbeddedLattice, shell_factor: int = 4) -> list[tuple]:
    """Voronoi-relevant vectors: +-v are the only shortest vectors of v + 2L."""
    _check_dim(lattice)
    bound = shell_factor * max(lattice.gram[i][i] for i in range(lattice.dimension))
    shell = shell_vectors(lattice, Fraction(bound))
    classes: dict[tuple, list[tuple]] = {}
    for t in shell:
        classes.setdefault(tuple(x % 2 for x in t), []).append(t)
    out = []
    for members in classes.values():
        norms = [lattice.inner(t, t) for t in members]
        mn = min(norms)
        shortest = [t for t, q in zip(members, norms) if q == mn]
        if len(shortest) == 2:
            out.extend(shortest)
    return sorted(out)


@lru_cache(maxsize=None)
def _voronoi_cached(lattice: EmbeddedLattice, shell_factor: int) -> tuple[tuple, tuple]:
    rel = relevant_vectors(lattice, shell_factor)
    n = lattice.dimension
    g = _gram_f(lattice)
    r = np.array(rel, dtype=float)
    lhs_all = r @ g  # row i: coefficients of <x, r_i>
    rhs_all = 0.5 * np.einsum("ij,jk,ik->i", r, g, r)
    found: list[np.ndarray] = []
    exact: list[tuple] = []
    for combo in itertools.combinations(range(len(rel)), n):
        a = lhs_all[list(combo)]
        if abs(np.linalg.det(a)) < 1e-9:
            continue
        x = np.linalg.solve(a, rhs_all[list(combo)])
        if np.any(lhs_all @ x > rhs_all + 1e-9):
            continue
        if any(np.allclose(x, y, atol=1e-9) for y in found):
            continue
        found.append(x)
        ex = linalg.solve(
            [[lattice.inner(_unit(n, k), rel[i]) for k in range(n)] for i in combo],
            [Fraction(lattice.inner(rel[i], rel[i]), 2) for i in combo],
        )
        exact.append(tuple(Fraction(v) for v in ex))
    zero = tuple(Fraction(0) for _ in range(n))
    dom = VoronoiDomain(lattice, zero, tuple(rel), tuple(exact))
    for v in exact:
        if not dom.contains(v):
            raise AssertionError("computed vertex violates a facet inequality")
    return tuple(rel), tuple(sorted(exact))


def _unit(n: int, k: int) -> tuple:
    return tuple(int(i == k) for i in range(n))


def voronoi_domain(
    lattice: EmbeddedLattice, center: Sequence[int] | None = None, shell_factor: int = 4
) -> VoronoiDomain:
    """Voronoi domain of ``lattice`` around the lattice point ``center``."""
    _check_dim(lattice)
    n = lattice.dimension
    center = tuple(center) if center is not None else (0,) * n
    if len(center) != n:
        raise ValueError("center has the wrong number of coordinates")
    rel, verts = _voronoi_cached(lattice, shell_factor)
    zero = tuple(Fraction(0) for _ in range(n))
    return VoronoiDomain(lattice, zero, rel, verts).translate(center)


def equidistant_points(lattice: EmbeddedLattice, x: Sequence[Fraction]) -> tuple:
    """Lattice points at minimal distance from ``x`` (x must lie in V_0)."""
    n = lattice.dimension
    r2 = lattice.inner(x, x)
    g = _gram_f(lattice)
    ginv = np.linalg.inv(g)
    xf = np.array([float(v) for v in x])
    rng = []
    for i in range(n):
        w = math.sqrt(float(r2) * ginv[i, i]) + 1e-6
        rng.append(np.arange(math.ceil(xf[i] - w), math.floor(xf[i] + w) + 1))
    grids = np.meshgrid(*rng, indexing="ij")
    z = np.stack([q.ravel() for q in grids], axis=1)
    dz = z - xf
    d2 = np.einsum("ij,jk,ik->i", dz, g, dz)
    out = []
    for row in z[np.abs(d2 - float(r2)) < 1e-7]:
        t = tuple(int(v) for v in row)
        diff = [Fraction(a) - b for a, b in zip(x, t)]
        q = lattice.inner(diff, diff)
        if q < r2:
            raise AssertionError("point is not in the Voronoi domain of the origin")
        if q == r2:
            out.append(t)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# face lattice and dual complex
# ---------------------------------------------------------------------------


@dataclass
class VoronoiComplex:
    lattice: EmbeddedLattice
    domain: VoronoiDomain
    faces: dict[int, list[PBoundary]]  # all faces of V_0 by dimension
    classes: dict[int, list[list[int]]]  # translation classes: indices into faces[p]

    def dual(self, face: PBoundary) -> DualBoundary:
        return dual_boundary(face)

    def representatives(self, p: int) -> list[PBoundary]:
        return [self.faces[p][c[0]] for c in self.classes[p]]


def _centroid(vertices) -> tuple:
    k = len(vertices)
    return tuple(sum((v[i] for v in vertices), Fraction(0)) / k for i in range(len(vertices[0])))


@lru_cache(maxsize=None)
def voronoi_complex(lattice: EmbeddedLattice) -> VoronoiComplex:
    _check_dim(lattice)
    dom = voronoi_domain(lattice)
    n = lattice.dimension
    verts = dom.vertices
    facet_sets = []
    for r in dom.relevant:
        half = Fraction(lattice.inner(r, r), 2)
        s = frozenset(i for i, v in enumerate(verts) if lattice.inner(v, r) == half)
        facet_sets.append(s)
    faces_sets = set(facet_sets)
    frontier = set(facet_sets)
    while frontier:
        new = set()
        for a in frontier:
            for b in faces_sets:
                c = a & b
                if c and c not in faces_sets and c not in new:
                    new.add(c)
        faces_sets |= new
        frontier = new
    faces_sets.add(frozenset(range(len(verts))))
    faces: dict[int, list[PBoundary]] = {p: [] for p in range(n + 1)}
    for s in sorted(faces_sets, key=lambda s: (len(s), sorted(s))):
        fv = tuple(verts[i] for i in sorted(s))
        p = linalg.affine_rank(fv)
        centers = equidistant_points(lattice, _centroid(fv))
        faces[p].append(PBoundary(p, fv, centers))
    # translation classes: F ~ F - t for t in S_F
    classes: dict[int, list[list[int]]] = {}
    for p, flist in faces.items():
        key = {frozenset(f.vertices): i for i, f in enumerate(flist)}
        parent = list(range(len(flist)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, f in enumerate(flist):
            for t in f.incident_centers:
                moved = frozenset(tuple(a - b for a, b in zip(v, t)) for v in f.vertices)
                j = key.get(moved)
                if j is None:
                    raise AssertionError("translated face is not a face of V_0")
                parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(len(flist)):
            groups.setdefault(find(i), []).append(i)
        classes[p] = sorted(groups.values())
    return VoronoiComplex(lattice, dom, faces, classes)


def dual_boundary(boundary: PBoundary) -> DualBoundary:
    """Convex hull of the incident centers; its dimension is n - p."""
    if not boundary.incident_centers:
        raise AssertionError("face without incident lattice points")
    pts = tuple(boundary.incident_centers)
    dim = linalg.affine_rank(pts)
    return DualBoundary(pts, dim, boundary)


def delone_cells(lattice: EmbeddedLattice) -> list[DeloneCell]:
    """Delone cells around the vertices of V_0, with hole classes mod the lattice."""
    _check_dim(lattice)
    dom = voronoi_domain(lattice)
    out = []
    for h in dom.vertices:
        cls = tuple(x - math.floor(x) for x in h)
        out.append(DeloneCell(h, cls, equidistant_points(lattice, h)))
    return out


def hole_classes(lattice: EmbeddedLattice) -> list[tuple]:
    return sorted({c.hole_class for c in delone_cells(lattice)})


# ---------------------------------------------------------------------------
# product tiles
# ---------------------------------------------------------------------------


def _project_region(points: Sequence[tuple], dim: int) -> ConvexRegion:
    region = ConvexRegion.from_points(points)
    if region.dim != dim:
        raise AssertionError("projection dimension mismatch")
    return region


@lru_cache(maxsize=None)
def product_tiles(scheme: ProjectionScheme, kind: str = "T") -> tuple[ProductTile, ...]:
    """One product tile per translation class of physical-dimension faces."""
    if kind not in ("T", "T*"):
        raise ValueError(f"kind must be 'T' or 'T*', got {kind!r}")
    cx = voronoi_complex(scheme.lattice)
    n, m = scheme.n, scheme.m
    p = m if kind == "T" else n - m
    out = []
    for idx, face in enumerate(cx.representatives(p)):
        dual = dual_boundary(face)
        par_src = face.vertices if kind == "T" else dual.vertices
        perp_src = dual.vertices if kind == "T" else face.vertices
        par_pts = [scheme.par(v) for v in par_src]
        perp_pts = [scheme.perp(v) for v in perp_src]
        par_r = ConvexRegion.from_points(par_pts)
        perp_r = ConvexRegion.from_points(perp_pts)
        if par_r.is_degenerate or perp_r.is_degenerate:
            raise ValueError(f"degenerate projection of boundary {face.vertices}")
        # lattice coordinates of the physical factor's vertices, in polygon order
        lookup = {}
        for v, q in zip(par_src, par_pts):
            if q in lookup and lookup[q] != v:
                raise ValueError(f"boundary {face.vertices} projects non-injectively")
            lookup[q] = tuple(Fraction(x) for x in v)
        par_vertices = tuple(lookup[q] for q in par_r.vertices)
        out.append(ProductTile(kind, idx, face, dual, par_vertices, par_r, perp_r))
    # shape classes by exact area of the physical factor, largest first
    areas = []
    for t in out:
        a = t.parallel_factor.measure()
        if not any(a == b for b in areas):
            areas.append(a)
    areas.sort(key=to_float, reverse=True)
    return tuple(
        ProductTile(
            t.kind,
            t.index,
            t.boundary,
            t.dual,
            t.par_vertices,
            t.parallel_factor,
            t.perp_factor,
            next(i for i, a in enumerate(areas) if a == t.parallel_factor.measure()),
        )
        for t in out
    )


def volume_partition(scheme: ProjectionScheme, kind: str = "T") -> tuple[Scalar, Scalar]:
    """(sum of product-tile volumes, lattice covolume), both exact in frame units."""
    total: Scalar = 0
    for t in product_tiles(scheme, kind):
        total = total + t.volume()
    return total, scheme.covolume()


# ---------------------------------------------------------------------------
# section tilings
# ---------------------------------------------------------------------------


def generic_offset(scheme: ProjectionScheme) -> tuple:
    """Default internal offset: small rationals cut from 1/pi, chosen to avoid singular positions."""
    k = scheme.n - scheme.m
    comps = []
    for i in range(k):
        val = 1 / (10 * math.pi ** (i + 1))
        comps.append(Fraction(round(val * 10**7), 10**7))
    return tuple(as_scalar(c, scheme.d) for c in comps)


def _region_bounds(region, d: int) -> tuple[tuple, tuple]:
    lo, hi = region
    lo = tuple(as_scalar(Fraction(x) if isinstance(x, float) else x, d) for x in lo)
    hi = tuple(as_scalar(Fraction(x) if isinstance(x, float) else x, d) for x in hi)
    return lo, hi


def _lift_scalar(x, d):
    return as_scalar(Fraction(x) if isinstance(x, float) else x, d)


def section_translates(
    scheme: ProjectionScheme,
    tile: ProductTile,
    c_perp: Sequence[Scalar],
    par_lo: np.ndarray,
    par_hi: np.ndarray,
    check_singular: bool = True,
) -> np.ndarray:
    """Lattice translations t with c_perp in (perp factor + t_perp), t_par in a box."""
    window = tile.perp_factor.negate()
    pts = tile.parallel_factor.float_vertices()
    lo = par_lo - pts.max(axis=0)
    hi = par_hi - pts.min(axis=0)
    z = enumerate_points(scheme, window, c_perp, lo, hi, None, "halfopen")
    if check_singular:
        zc = enumerate_points(scheme, window, c_perp, lo, hi, None, "closed")
        zo = enumerate_points(scheme, window, c_perp, lo, hi, None, "open")
        if len(zc) != len(zo):
            bump = generic_offset(scheme)
            suggestion = tuple(c + b * Fraction(1, 1000) for c, b in zip(c_perp, bump))
            raise SingularOffsetError(
                "offset lies on the boundary of a projected dual boundary; "
                f"try {[to_float(x) for x in suggestion]}",
                suggestion,
            )
    return z


def section_tiling(
    scheme: ProjectionScheme,
    kind: str,
    c_perp: Sequence[Scalar] | None,
    region,
    names: Sequence[str] | None = None,
    tiling: str | None = None,
) -> Patch:
    """Tiles of the section at height ``c_perp`` meeting ``region`` (a frame-coordinate box).

    ``region`` is ``(lo, hi)``; tiles are kept whole when their interior
    meets the box, so the patch covers the box.
    """
    d, m = scheme.d, scheme.m
    c = generic_offset(scheme) if c_perp is None else tuple(_lift_scalar(x, d) for x in c_perp)
    lo, hi = _region_bounds(region, d)
    patch = Patch.empty(tiling or scheme.name, "section", d, scheme.par_frame.name)
    patch.meta = {
        "kind": kind,
        "c_perp": [x.to_json() for x in c],
        "region": [[x.to_json() for x in lo], [x.to_json() for x in hi]],
    }
    if any(sign(b - a) <= 0 for a, b in zip(lo, hi)):
        return patch
    lo_f = np.array([to_float(x) for x in lo])
    hi_f = np.array([to_float(x) for x in hi])
    box = box_region(lo, hi, d)
    lookup: dict = {}
    for tile in product_tiles(scheme, kind):
        zs = section_translates(scheme, tile, c, lo_f, hi_f)
        base = [scheme.par(v) for v in tile.par_vertices]
        base_f = np.array([[to_float(x) for x in p] for p in base])
        for z in zs:
            t = tuple(int(x) for x in z)
            tpar = scheme.par(t)
            shifted_f = base_f + np.array([to_float(x) for x in tpar])
            mn, mx = shifted_f.min(axis=0), shifted_f.max(axis=0)
            if np.any(mx < lo_f + MARGIN) or np.any(mn > hi_f - MARGIN):
                if np.any(mx < lo_f - MARGIN) or np.any(mn > hi_f + MARGIN):
                    continue
                pts = [vadd(p, tpar) for p in base]
                if not _meets_interior(pts, box, m):
                    continue
            else:
                # the box is convex and some vertex is strictly inside the
                # slab in every coordinate only when the tile meets the interior
                pts = [vadd(p, tpar) for p in base]
                if not _float_meets(shifted_f, lo_f, hi_f) and not _meets_interior(pts, box, m):
                    continue
            idx = []
            for p, v in zip(pts, tile.par_vertices):
                lift = tuple(a + b for a, b in zip(v, t))
                idx.append(patch.add_point(p, lift, lookup))
            ttype = names[tile.shape] if names else f"shape{tile.shape}"
            patch.tiles.append(Tile(ttype, tuple(idx), tile.index))
    return patch.canonical()


def _float_meets(pts_f: np.ndarray, lo_f: np.ndarray, hi_f: np.ndarray) -> bool:
    # a vertex well inside the box certifies an interior intersection
    inside = np.all((pts_f > lo_f + MARGIN) & (pts_f < hi_f - MARGIN), axis=1)
    return bool(inside.any())


def _meets_interior(pts, box: ConvexRegion, m: int) -> bool:
    if m == 1:
        a, b = sorted((pts[0][0], pts[1][0]), key=to_float)
        lo, hi = box.vertices[0][0], box.vertices[1][0]
        return sign(b - lo) > 0 and sign(hi - a) > 0
    clipped = clip_convex(pts, box.vertices)
    return bool(clipped) and sign(polygon_area(clipped)) > 0


def covered_measure(patch: Patch, region) -> tuple[Scalar, Scalar]:
    """(sum over tiles of measure inside region, measure of region), exact.

    Equality certifies a gap-free cover of the box once tiles are known to
    be interior-disjoint (checked separately through edge sharing).
    """
    lo, hi = _region_bounds(region, patch.d)
    box = box_region(lo, hi, patch.d)
    total: Scalar = 0
    lo_f = np.array([to_float(x) for x in lo])
    hi_f = np.array([to_float(x) for x in hi])
    for tile in patch.tiles:
        pts = patch.tile_points(tile)
        if len(pts[0]) == 1:
            a, b = sorted((pts[0][0], pts[1][0]), key=to_float)
            a = a if sign(a - lo[0]) > 0 else lo[0]
            b = b if sign(hi[0] - b) > 0 else hi[0]
            if sign(b - a) > 0:
                total = total + (b - a)
            continue
        pf = np.array([[to_float(x) for x in p] for p in pts])
        if np.all(pf.min(axis=0) > lo_f + 1e-9) and np.all(pf.max(axis=0) < hi_f - 1e-9):
            total = total + abs(polygon_area(pts))
        else:
            clipped = clip_convex(pts, box.vertices)
            if clipped:
                total = total + polygon_area(clipped)
    return total, box.measure()


def interior_edge_check(patch: Patch) -> list[tuple]:
    """Edges that violate face-to-face structure.

    Every edge must be shared by at most two tiles, lying on opposite sides.
    Returns the offending edges (vertex index pairs).
    """
    from .geometry import orient

    bad = []
    for (a, b), uses in patch.edges().items():
        if len(uses) > 2:
            bad.append((a, b))
            continue
        if len(uses) == 2:
            sides = []
            for ti, k in uses:
                vs = patch.tiles[ti].vertices
                other = next(v for v in vs if v not in (a, b))
                sides.append(orient(patch.points[a], patch.points[b], patch.points[other]))
            if sides[0] == sides[1]:
                bad.append((a, b))
    return bad


# ---------------------------------------------------------------------------
# compatible quasiperiodic functions
# ---------------------------------------------------------------------------


def compatible_function_eval(
    scheme: ProjectionScheme,
    kind: str,
    tile_values: dict[int, Callable[[np.ndarray], float]],
    x_par: Sequence[Scalar],
    c_perp: Sequence[Scalar] | None = None,
    region=None,
):
    """Evaluate the function that equals ``tile_values[class](x - t_par)`` on tile (F + t)_par.

    Points on shared tile boundaries take the value from the first tile in
    canonical order. ``region`` (if given) bounds the admissible points.
    """
    d = scheme.d
    x = tuple(_lift_scalar(v, d) for v in x_par)
    if region is not None:
        lo, hi = _region_bounds(region, d)
        if any(sign(v - a) < 0 or sign(b - v) < 0 for v, a, b in zip(x, lo, hi)):
            raise ValueError("point outside computed region")
    xf = np.array([to_float(v) for v in x])
    c = generic_offset(scheme) if c_perp is None else tuple(_lift_scalar(v, d) for v in c_perp)
    for tile in product_tiles(scheme, kind):
        zs = section_translates(scheme, tile, c, xf - 1e-9, xf + 1e-9, check_singular=False)
        for z in zs:
            t = tuple(int(v) for v in z)
            tpar = scheme.par(t)
            local = tuple(a - b for a, b in zip(x, tpar))
            if tile.parallel_factor.contains(local, "closed"):
                profile = tile_values[tile.index]
                return profile(np.array([to_float(v) for v in local]))
    raise ValueError("point outside computed region")


def duality_report(lattice: EmbeddedLattice) -> dict:
    """dim X_p + dim X*_{n-p} over every face of V_0, plus Delone cell shapes."""
    vc = voronoi_complex(lattice)
    n = lattice.dimension
    bad = []
    counts = {}
    for p, flist in vc.faces.items():
        counts[p] = len(flist)
        for f in flist:
            dual = dual_boundary(f)
            if f.dim + dual.dim != n:
                bad.append({"p": p, "vertices": len(f.vertices), "dual_dim": dual.dim})
    cells = delone_cells(lattice)
    return {
        "lattice": lattice.name,
        "dimension": n,
        "faces_by_dim": {str(p): c for p, c in sorted(counts.items())},
        "voronoi_vertices": len(vc.domain.vertices),
        "delone_cell_sizes": sorted({len(c.vertices) for c in cells}),
        "hole_classes": len(hole_classes(lattice)),
        "violations": bad,
        "passed": not bad,
    }
