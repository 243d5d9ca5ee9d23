"""Coverings of tilings by overlapping clusters.

A cluster is a regular polygon placed at a module point, in one of a few
orientations. An occurrence is a placement whose polygon is exactly the
union of patch tiles (equal total area, every tile inside). Occurrences are
searched from the patch itself: every cluster corner must be a patch vertex,
so candidate centres are vertices minus corner offsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exactnum import QuadValue, Scalar, as_scalar, to_float
from .geometry import point_in_convex, polygon_area, vadd, vsub
from .lattice import pentagonal_frame
from .matching import vertex_class
from .patch import Patch


def _times_zeta(v):
    # zeta (x + y zeta) = -y + (x + (tau - 1) y) zeta in the basis (1, zeta)
    x, y = v
    return (-y, x + (QuadValue(-1, 1, 5)) * y)


def rotate36(v, k: int = 1):
    """Rotate a frame vector by k * 36 degrees (e^(i pi/5) = -zeta^3)."""
    for _ in range(k % 10):
        w = v
        for _ in range(3):
            w = _times_zeta(w)
        v = (-w[0], -w[1])
    return v


@dataclass(frozen=True)
class CoveringCluster:
    name: str
    corners: tuple  # orientation -> tuple of corner offsets from the centre (ccw)
    anchor_classes: tuple  # vertex classes allowed for the centre; empty = any
    tile_count: int | None = None  # tiles in every occurrence, if fixed

    @property
    def area(self) -> Scalar:
        return polygon_area(self.corners[0])

    def polygon(self, center, orientation: int = 0) -> list:
        return [vadd(center, c) for c in self.corners[orientation]]

    @property
    def circumradius(self) -> float:
        fr = pentagonal_frame("a4-par")
        return max(float(np.linalg.norm(fr.to_cartesian(c))) for c in self.corners[0])

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "corners": [[[as_scalar(x, 5).to_json() for x in p] for p in o] for o in self.corners],
            "anchor_classes": list(self.anchor_classes),
            "tile_count": self.tile_count,
        }


def regular_cluster(
    name: str, sides: int, radius: Scalar, orientations: Sequence[int], anchor_classes=(), tile_count=None
) -> CoveringCluster:
    """Regular polygon of the given circumradius with corners along multiples of 36 degrees.

    ``orientations`` lists the 36-degree turns of the first corner.
    """
    step = 10 // sides
    base = (as_scalar(radius, 5), QuadValue(0, 0, 5))
    corners = []
    for o in orientations:
        corners.append(tuple(rotate36(base, o + step * k) for k in range(sides)))
    return CoveringCluster(name, tuple(corners), tuple(anchor_classes), tile_count)


def decagon_cluster() -> CoveringCluster:
    """Decagon of unit edge (circumradius tau); exactly tiled occurrences hold 10 rhombs.

    Centres are not restricted: most sit on projected lattice points, the
    rest on star-shaped vertex stars (see ``center_classes``).
    """
    return regular_cluster("decagon", 10, QuadValue(0, 1, 5), [0], tile_count=10)


def pentagon_clusters() -> list[CoveringCluster]:
    """Two pentagons for the triangle tiling: circumradius 1 (3 tiles) and tau (7 tiles)."""
    return [
        regular_cluster("pentagon-small", 5, 1, [0, 1], tile_count=3),
        regular_cluster("pentagon-large", 5, QuadValue(0, 1, 5), [0, 1], tile_count=7),
    ]


def find_covering(patch: Patch, clusters: Sequence[CoveringCluster]) -> list[Placement]:
    return [pl for c in clusters for pl in find_cluster_centers(patch, c)]


def cluster_templates(patch: Patch, placements: Sequence[Placement]) -> dict[tuple, int]:
    """Distinct fillings of the occurrences (tiles relative to the centre) with counts."""
    out: dict[tuple, int] = {}
    for pl in placements:
        key = tuple(
            sorted(
                (
                    patch.tiles[t].type,
                    tuple(sorted(tuple(vsub(patch.points[v], pl.center)) for v in patch.tiles[t].vertices)),
                )
                for t in pl.tiles
            )
        )
        out[key] = out.get(key, 0) + 1
    return out


@dataclass
class Placement:
    cluster: str
    center: tuple
    center_lift: tuple | None
    orientation: int
    tiles: tuple  # tile indices inside

    def to_dict(self) -> dict:
        return {
            "cluster": self.cluster,
            "center": [as_scalar(x, 5).to_json() for x in self.center],
            "orientation": self.orientation,
            "tiles": list(self.tiles),
        }


def _cart(patch: Patch) -> np.ndarray:
    from .cutproject import cartesian_matrix

    return patch.float_points(cartesian_matrix(patch))


def find_cluster_centers(patch: Patch, cluster: CoveringCluster) -> list[Placement]:
    """All placements where the cluster polygon is exactly tiled by patch tiles."""
    if not patch.tiles:
        return []
    from .cutproject import cartesian_matrix

    cart = cartesian_matrix(patch)
    xy = _cart(patch)
    scheme_lift = None
    if any(lf is not None for lf in patch.lifts):
        from .lattice import penrose_scheme

        scheme_lift = penrose_scheme().lift
    cell = 1.0
    grid: dict[tuple, list[int]] = {}
    for ti, t in enumerate(patch.tiles):
        c = xy[list(t.vertices)].mean(axis=0)
        grid.setdefault((int(math.floor(c[0] / cell)), int(math.floor(c[1] / cell))), []).append(ti)
    used = {v for t in patch.tiles for v in t.vertices}
    target = cluster.area
    rad = cluster.circumradius
    reach = int(math.ceil(rad / cell)) + 1
    tile_area = {}
    out = []
    seen = set()
    for o, corners in enumerate(cluster.corners):
        for v in sorted(used):
            for off in corners:
                center = vsub(patch.points[v], off)
                if (center, o) in seen:
                    continue
                seen.add((center, o))
                lift = None
                if scheme_lift is not None:
                    lift = scheme_lift(center, integral=False)
                    if cluster.anchor_classes and vertex_class(lift) not in cluster.anchor_classes:
                        continue
                poly = cluster.polygon(center, o)
                pf = np.array([cart @ np.array([to_float(x) for x in p]) for p in poly])
                cf = pf.mean(axis=0)
                members = []
                gx, gy = int(math.floor(cf[0] / cell)), int(math.floor(cf[1] / cell))
                for dx in range(-reach, reach + 1):
                    for dy in range(-reach, reach + 1):
                        for ti in grid.get((gx + dx, gy + dy), ()):
                            if _inside(patch, patch.tiles[ti], poly, pf, xy):
                                members.append(ti)
                total = as_scalar(0, 5)
                for ti in members:
                    if ti not in tile_area:
                        tile_area[ti] = abs(polygon_area(patch.tile_points(patch.tiles[ti])))
                    total = total + tile_area[ti]
                if total == target:
                    out.append(Placement(cluster.name, center, lift, o, tuple(sorted(members))))
    out.sort(key=lambda p: (p.orientation, p.center_lift or (), p.tiles))
    return out


def _inside(patch: Patch, tile, poly, pf: np.ndarray, xy: np.ndarray) -> bool:
    k = len(pf)
    for v in tile.vertices:
        x = xy[v]
        margin = math.inf
        for i in range(k):
            a, b = pf[i], pf[(i + 1) % k]
            e = b - a
            s = (e[0] * (x[1] - a[1]) - e[1] * (x[0] - a[0])) / math.hypot(*e)
            margin = min(margin, s)
        if margin < -1e-7:
            return False
        if margin < 1e-7 and not point_in_convex(poly, patch.points[v]):
            return False
    return True


@dataclass
class CoveringReport:
    interior_tiles: int
    covered: int
    uncovered: list
    membership: dict = field(default_factory=dict)  # multiplicity -> tile count
    margin: float = 0.0

    @property
    def fraction(self) -> float:
        return self.covered / self.interior_tiles if self.interior_tiles else 1.0

    @property
    def complete(self) -> bool:
        return not self.uncovered

    def to_dict(self) -> dict:
        return {
            "interior_tiles": self.interior_tiles,
            "covered": self.covered,
            "covered_fraction": self.fraction,
            "uncovered": list(self.uncovered),
            "membership": {str(k): v for k, v in sorted(self.membership.items())},
            "margin": self.margin,
        }


def interior_tile_indices(patch: Patch, margin: float) -> list[int]:
    """Tiles whose vertices all lie at least ``margin`` from the patch rim."""
    from .inflation import boundary_vertices

    xy = _cart(patch)
    rim = boundary_vertices(patch)
    if not rim:
        return list(range(len(patch.tiles)))
    rxy = xy[rim]
    dist = np.sqrt(((xy[:, None, :] - rxy[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
    return [ti for ti, t in enumerate(patch.tiles) if all(dist[v] >= margin for v in t.vertices)]


def verify_covering(patch: Patch, placements: Sequence[Placement], margin: float | None = None) -> CoveringReport:
    """Membership counts of interior tiles; margin defaults to the largest cluster diameter."""
    if margin is None:
        margin = 0.0
        for pl in placements:
            pts = np.array([[to_float(x) for x in patch.points[v]] for ti in pl.tiles for v in patch.tiles[ti].vertices])
            if len(pts):
                from .cutproject import cartesian_matrix

                c = pts @ cartesian_matrix(patch).T
                diam = float(np.sqrt(((c[:, None, :] - c[None, :, :]) ** 2).sum(axis=2)).max())
                margin = max(margin, diam)
    count: dict[int, int] = {}
    for pl in placements:
        for ti in pl.tiles:
            count[ti] = count.get(ti, 0) + 1
    interior = interior_tile_indices(patch, margin)
    uncovered = [ti for ti in interior if count.get(ti, 0) == 0]
    membership: dict[int, int] = {}
    for ti in interior:
        m = count.get(ti, 0)
        membership[m] = membership.get(m, 0) + 1
    return CoveringReport(len(interior), len(interior) - len(uncovered), uncovered, membership, margin)


def center_classes(placements: Sequence[Placement]) -> dict[int, int]:
    """How many placements sit on each vertex class (class purity check)."""
    out: dict[int, int] = {}
    for pl in placements:
        if pl.center_lift is not None:
            k = vertex_class(pl.center_lift)
            out[k] = out.get(k, 0) + 1
    return out
