"""Window-based cut-and-project point sets and tiling assembly.

Windows are never typed in: the octagon for Ammann-Beenker is the internal
image of the Voronoi cell of Z^4, and the Penrose pentagons and the decagon
are internal images of Delone and Voronoi cells of A4, all taken from
:mod:`quasitile.dualcell`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import dualcell
from ._enum import model_set_in_disk
from .exactnum import QuadValue, Scalar, as_scalar, sign, to_float
from .geometry import ConvexRegion, polygon_area, vadd
from .lattice import ProjectionScheme, ab_scheme, penrose_scheme
from .patch import Patch, Tile

WINDOW_SCHEMA = "quasitile.windows/1"


@dataclass(frozen=True)
class Window:
    polygon: ConvexRegion
    offset: tuple
    boundary_policy: str = "halfopen"

    def contains(self, y: Sequence[Scalar]) -> bool:
        return self.polygon.translate(self.offset).contains(tuple(y), self.boundary_policy)

    def is_convex(self) -> bool:
        from .geometry import orient

        vs = self.polygon.vertices
        if self.polygon.dim == 1:
            return True
        return all(orient(vs[i], vs[(i + 1) % len(vs)], vs[(i + 2) % len(vs)]) > 0 for i in range(len(vs)))

    def to_dict(self) -> dict:
        return {
            "polygon": [[x.to_json() for x in v] for v in self.polygon.vertices],
            "offset": [x.to_json() for x in self.offset],
            "boundary_policy": self.boundary_policy,
        }

    @classmethod
    def from_dict(cls, data: dict, d: int) -> Window:
        verts = [tuple(QuadValue.from_json(c, d) for c in v) for v in data["polygon"]]
        return cls(
            ConvexRegion.from_points(verts),
            tuple(QuadValue.from_json(c, d) for c in data["offset"]),
            data.get("boundary_policy", "halfopen"),
        )


@dataclass
class CutProjectSpec:
    """Scheme plus one (shift, window) pair per vertex class.

    A point ``x = z + shift`` (z integer) of a class is accepted iff
    ``x_perp`` lies in ``offset + polygon``.
    """

    scheme: ProjectionScheme
    windows: dict = field(default_factory=dict)  # class label -> (shift, Window)

    def to_json(self) -> str:
        out = {
            "schema": WINDOW_SCHEMA,
            "scheme": self.scheme.name,
            "classes": {
                k: {"shift": [str(Fraction(x)) for x in s], "window": w.to_dict()}
                for k, (s, w) in sorted(self.windows.items())
            },
        }
        return json.dumps(out, sort_keys=True, indent=1)

    def with_overrides(self, text: str) -> CutProjectSpec:
        """Replace windows from a JSON document in the :data:`WINDOW_SCHEMA` layout."""
        data = json.loads(text)
        if data.get("schema") != WINDOW_SCHEMA:
            raise ValueError("unsupported window schema")
        windows = dict(self.windows)
        for k, entry in data["classes"].items():
            windows[k] = (
                tuple(Fraction(x) for x in entry["shift"]),
                Window.from_dict(entry["window"], self.scheme.d),
            )
        return CutProjectSpec(self.scheme, windows)


# ---------------------------------------------------------------------------
# exact projection of many integer vectors
# ---------------------------------------------------------------------------


def _coeff_arrays(images, d):
    # images: n points with m coordinates; return (L, A, B) with image = (A + B w) / L
    n, m = len(images), len(images[0])
    fr = [[as_scalar(x, d) for x in p] for p in images]
    den = 1
    for p in fr:
        for x in p:
            den = math.lcm(den, Fraction(x.a).denominator, Fraction(x.b).denominator)
    a = np.array([[int(Fraction(fr[j][k].a) * den) for k in range(m)] for j in range(n)], dtype=object)
    b = np.array([[int(Fraction(fr[j][k].b) * den) for k in range(m)] for j in range(n)], dtype=object)
    return den, a, b


def exact_images(scheme: ProjectionScheme, z: np.ndarray, shift=None, which: str = "par") -> list[tuple]:
    """Exact images of the rows of ``z`` (+ shift) in the chosen frame."""
    images = scheme.par_images if which == "par" else scheme.perp_images
    d = scheme.d
    den, a, b = _coeff_arrays(images, d)
    zs = np.asarray(z, dtype=object)
    if shift is not None:
        sden = 1
        for s in shift:
            sden = math.lcm(sden, Fraction(s).denominator)
        sh = np.array([int(Fraction(s) * sden) for s in shift], dtype=object)
        zs = zs * sden + sh
        den = den * sden
    pa = zs @ a if len(zs) else np.zeros((0, a.shape[1]), dtype=object)
    pb = zs @ b if len(zs) else np.zeros((0, a.shape[1]), dtype=object)
    out = []
    for ra, rb in zip(pa, pb):
        out.append(tuple(QuadValue._new(Fraction(int(x), den), Fraction(int(y), den), d) for x, y in zip(ra, rb)))
    return out


def _lift_rows(z: np.ndarray, shift) -> list[tuple]:
    if shift is None:
        return [tuple(Fraction(int(x)) for x in row) for row in z]
    return [tuple(Fraction(int(x)) + Fraction(s) for x, s in zip(row, shift)) for row in z]


def cutproject_points(spec: CutProjectSpec, radius, classes: Sequence[str] | None = None) -> Patch:
    """Accepted points of the chosen classes within a closed disk of ``radius``."""
    scheme = spec.scheme
    patch = Patch.empty(scheme.name, "cutproject", scheme.d, scheme.par_frame.name)
    labels = sorted(spec.windows) if classes is None else list(classes)
    per_class = {}
    for label in labels:
        if label not in spec.windows:
            raise KeyError(f"missing window data for class {label!r}")
        shift, win = spec.windows[label]
        zero_shift = all(Fraction(s) == 0 for s in shift)
        z = model_set_in_disk(
            scheme, win.polygon, win.offset, radius, None if zero_shift else shift, win.boundary_policy
        )
        pts = exact_images(scheme, z, None if zero_shift else shift)
        lifts = _lift_rows(z, None if zero_shift else shift)
        per_class[label] = len(pts)
        patch.points.extend(pts)
        patch.lifts.extend(lifts)
    patch.meta = {"classes": per_class, "radius": str(radius)}
    return patch.canonical()


# ---------------------------------------------------------------------------
# Ammann-Beenker
# ---------------------------------------------------------------------------


def internal_image(scheme: ProjectionScheme, vertices) -> ConvexRegion:
    return ConvexRegion.from_points([scheme.perp(v) for v in vertices])


def ab_window() -> ConvexRegion:
    """Internal image of the Voronoi cell of Z^4: the regular octagon of unit edge."""
    s = ab_scheme()
    return internal_image(s, dualcell.voronoi_domain(s.lattice).vertices)


def ab_spec(offset=None) -> CutProjectSpec:
    s = ab_scheme()
    off = dualcell.generic_offset(s) if offset is None else tuple(as_scalar(x, 2) for x in offset)
    return CutProjectSpec(s, {"0": ((0, 0, 0, 0), Window(ab_window(), off))})


def ab_vertex_set(radius, offset=None) -> Patch:
    patch = cutproject_points(ab_spec(offset), radius)
    patch.tiling = "ab"
    return patch


def ab_tiling(radius, offset=None) -> Patch:
    """Unit-distance graph on the AB vertex set, assembled into squares and rhombs."""
    scheme = ab_scheme()
    verts = ab_vertex_set(radius + 3, offset)
    patch = _assemble_unit_tiling(verts, list(scheme.par_images), radius, _ab_tile_type)
    patch.tiling = "ab"
    return patch


def _ab_tile_type(i: int, j: int) -> str:
    return "square" if (j - i) % 4 == 2 else "rhomb"


# ---------------------------------------------------------------------------
# Penrose (A4, kind T) and Tuebingen triangles (A4, kind T*)
# ---------------------------------------------------------------------------


def penrose_windows(offset=None) -> CutProjectSpec:
    """Class 0: lattice points (decagon centres); classes 1-4: projected holes.

    A hole ``h + t`` is a rhomb vertex iff the section meets the Delone cell
    ``D_h + t`` internally, i.e. ``(h + t)_perp`` lies in
    ``offset + (h - D_h)_perp``; lattice points ``t`` are decagon centres iff
    ``t_perp`` lies in ``offset + (V_0)_perp``.
    """
    s = penrose_scheme()
    lat = s.lattice
    off = dualcell.generic_offset(s) if offset is None else tuple(as_scalar(x, 5) for x in offset)
    dom = dualcell.voronoi_domain(lat)
    windows = {"0": (tuple(Fraction(0) for _ in range(4)), Window(internal_image(s, dom.vertices), off))}
    seen = {}
    for cell in dualcell.delone_cells(lat):
        label = str(_hole_label(cell.hole_class))
        if label in seen:
            continue
        h = cell.hole
        poly = internal_image(s, [tuple(a - b for a, b in zip(h, v)) for v in cell.vertices])
        seen[label] = True
        windows[label] = (h, Window(poly, off))
    return CutProjectSpec(s, dict(sorted(windows.items())))


def _hole_label(cls: tuple) -> int:
    # A4 glue class: the hole e_1 + .. + e_k - (k/5)(1,..,1) has root
    # coordinates with first entry (5 - k)/5 mod 1
    return int(round((1 - float(cls[0])) * 5)) % 5


def penrose_vertex_set(radius, offset=None, classes=("1", "2", "3", "4")) -> Patch:
    patch = cutproject_points(penrose_windows(offset), radius, classes)
    patch.tiling = "penrose"
    return patch


def zeta_powers() -> list[tuple]:
    from .lattice import _zeta_powers

    return _zeta_powers()


def penrose_tiling(radius, offset=None) -> Patch:
    """Rhomb tiling assembled from the unit-distance graph of the vertex set."""
    verts = penrose_vertex_set(radius + 3, offset)
    patch = _assemble_unit_tiling(verts, zeta_powers(), radius, _penrose_tile_type)
    patch.tiling = "penrose"
    return patch


def _penrose_tile_type(i: int, j: int) -> str:
    return "thick" if (j - i) % 5 in (1, 4) else "thin"


def decagon_centers(radius, offset=None) -> Patch:
    patch = cutproject_points(penrose_windows(offset), radius, ["0"])
    patch.tiling = "penrose"
    return patch


def triangle_vertex_set(radius, offset=None) -> Patch:
    """Tuebingen triangle vertices: lattice points whose Voronoi cell meets the section."""
    s = penrose_scheme()
    off = dualcell.generic_offset(s) if offset is None else tuple(as_scalar(x, 5) for x in offset)
    dom = dualcell.voronoi_domain(s.lattice)
    spec = CutProjectSpec(s, {"0": ((0, 0, 0, 0), Window(internal_image(s, dom.vertices), off))})
    patch = cutproject_points(spec, radius)
    patch.tiling = "ttt"
    return patch


def triangle_tiling(radius, offset=None) -> Patch:
    """Triangles (D + t)_par for Delone 2-faces D whose tile window holds the offset."""
    s = penrose_scheme()
    off = dualcell.generic_offset(s) if offset is None else tuple(as_scalar(x, 5) for x in offset)
    patch = Patch.empty("ttt", "cutproject", 5, s.par_frame.name)
    lookup: dict = {}
    r2 = Fraction(radius) ** 2
    for tile in dualcell.product_tiles(s, "T*"):
        zs = model_set_in_disk(s, tile.perp_factor.negate(), off, radius + 3)
        base = [s.par(v) for v in tile.par_vertices]
        for z in zs:
            t = tuple(int(x) for x in z)
            tpar = s.par(t)
            pts = [vadd(p, tpar) for p in base]
            if any(sign(s.par_frame.norm2(p) - r2) > 0 for p in pts):
                continue
            idx = []
            for p, v in zip(pts, tile.par_vertices):
                idx.append(patch.add_point(p, tuple(a + b for a, b in zip(v, t)), lookup))
            patch.tiles.append(Tile("large" if tile.shape == 0 else "small", tuple(idx), tile.index))
    patch.meta = {"radius": str(radius)}
    return patch.canonical()


# ---------------------------------------------------------------------------
# face assembly
# ---------------------------------------------------------------------------


def _assemble_unit_tiling(verts: Patch, directions: list[tuple], radius, tile_type) -> Patch:
    """Trace the faces of the graph joining points that differ by +-directions[k]."""
    pts = verts.points
    index = {p: i for i, p in enumerate(pts)}
    nbrs: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(pts))}
    for i, p in enumerate(pts):
        for k, dvec in enumerate(directions):
            q = vadd(p, dvec)
            j = index.get(q)
            if j is not None:
                nbrs[i].append((j, k))
                nbrs[j].append((i, k + len(directions)))
    # order neighbours by direction angle; direction k + len(directions) is -directions[k]
    ang = {}
    for k, dvec in enumerate(directions):
        x, y = _cart(verts, dvec)
        ang[k] = math.atan2(y, x)
        ang[k + len(directions)] = math.atan2(-y, -x)
    for i in nbrs:
        nbrs[i].sort(key=lambda e: ang[e[1]])
    pos = {i: {j: n for n, (j, _) in enumerate(nbrs[i])} for i in nbrs}
    dir_of = {(i, j): k for i in nbrs for j, k in nbrs[i]}
    visited = set()
    faces = []
    for i in nbrs:
        for j, _ in nbrs[i]:
            if (i, j) in visited:
                continue
            cycle = []
            a, b = i, j
            ok = True
            while (a, b) not in visited:
                visited.add((a, b))
                cycle.append(a)
                # next half-edge: at b, the neighbour just before a in ccw order
                lst = nbrs[b]
                k = pos[b][a]
                c = lst[(k - 1) % len(lst)][0]
                a, b = b, c
                if len(cycle) > 64:
                    ok = False
                    break
            if ok and (a, b) == (i, j):
                faces.append(cycle)
    out = Patch.empty(verts.tiling, "cutproject", verts.d, verts.frame)
    lookup: dict = {}
    r2 = Fraction(radius) ** 2 if not isinstance(radius, QuadValue) else radius * radius
    frame_gram = _frame_of(verts)
    inner_r = float(radius)
    for cyc in faces:
        poly = [pts[v] for v in cyc]
        area = polygon_area(poly)
        if sign(area) <= 0:
            continue
        far = max(np.linalg.norm(_cart(verts, p)) for p in poly)
        if len(cyc) != 4:
            if far < inner_r + 1.0:
                raise RuntimeError(f"face assembly failure: {len(cyc)}-gon at {_cart(verts, poly[0])}")
            continue
        if any(sign(frame_gram(p) - r2) > 0 for p in poly):
            continue
        k0 = dir_of[(cyc[0], cyc[1])]
        k1 = dir_of[(cyc[1], cyc[2])]
        i0, i1 = sorted((k0 % len(directions), k1 % len(directions)))
        idx = tuple(out.add_point(p, verts.lifts[v], lookup) for p, v in zip(poly, cyc))
        out.tiles.append(Tile(tile_type(i0, i1), idx, i0 * len(directions) + i1))
    out.meta = {"radius": str(radius)}
    return out.canonical()


def _frame_of(patch: Patch):
    if patch.frame.startswith("a4"):
        from .lattice import pentagonal_frame

        fr = pentagonal_frame(patch.frame)
    else:
        from .geometry import cartesian_frame

        fr = cartesian_frame(patch.d, 2)
    return fr.norm2


def cartesian_matrix(patch: Patch) -> np.ndarray:
    if patch.frame.startswith("a4"):
        from .lattice import pentagonal_frame

        return pentagonal_frame(patch.frame).basis_matrix()
    return np.eye(patch.dim)


def _cart(patch: Patch, p) -> np.ndarray:
    return cartesian_matrix(patch) @ np.array([to_float(x) for x in p])
