"""Finite tiling patches and their versioned JSON form.

A patch holds vertices (lattice-coordinate lift plus exact physical point)
and tiles (type tag plus vertex indices in ccw order). Every construction
route emits this type, so comparisons between routes are plain set
comparisons of exact coordinates.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactnum import QuadValue, Scalar, as_scalar, to_float
from .geometry import _cmp_points, polygon_area

PATCH_SCHEMA = "quasitile.patch/1"


@dataclass(frozen=True)
class Tile:
    type: str
    vertices: tuple  # indices into Patch.vertices, ccw
    orientation: int = 0
    decoration: tuple | None = None  # one entry per edge (vertices[i] -> vertices[i+1])


@dataclass
class Patch:
    tiling: str
    provenance: str
    d: int
    points: list = field(default_factory=list)  # exact physical points (tuples)
    lifts: list = field(default_factory=list)  # lattice coordinates (tuples of Fraction) or None
    tiles: list = field(default_factory=list)
    frame: str = "cartesian"
    meta: dict = field(default_factory=dict)

    # --- construction helpers -------------------------------------------
    @classmethod
    def empty(cls, tiling: str, provenance: str, d: int, frame: str = "cartesian") -> Patch:
        return cls(tiling, provenance, d, frame=frame)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0]) if self.points else 2

    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def add_point(self, p: tuple, lift=None, lookup: dict | None = None) -> int:
        if lookup is not None and p in lookup:
            return lookup[p]
        self.points.append(p)
        self.lifts.append(lift)
        if lookup is not None:
            lookup[p] = len(self.points) - 1
        return len(self.points) - 1

    def tile_points(self, tile: Tile) -> list[tuple]:
        return [self.points[i] for i in tile.vertices]

    def float_points(self, cart: np.ndarray | None = None) -> np.ndarray:
        if not self.points:
            return np.zeros((0, 2))
        arr = np.array([[to_float(x) for x in p] for p in self.points])
        return arr if cart is None else arr @ cart.T

    def point_set(self) -> set:
        return set(self.points)

    def type_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.tiles:
            out[t.type] = out.get(t.type, 0) + 1
        return out

    def tile_area(self, tile: Tile) -> Scalar:
        pts = self.tile_points(tile)
        if len(pts[0]) == 1:
            return abs(pts[1][0] - pts[0][0])
        return polygon_area(pts)

    def edges(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        """Undirected edge (i<j) -> list of (tile index, edge position)."""
        out: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for ti, t in enumerate(self.tiles):
            vs = t.vertices
            for k in range(len(vs)):
                a, b = vs[k], vs[(k + 1) % len(vs)]
                key = (a, b) if a < b else (b, a)
                out.setdefault(key, []).append((ti, k))
        return out

    # --- canonical form ---------------------------------------------------
    def canonical(self) -> Patch:
        """Copy with vertices sorted (by lift when known, else by exact point) and tiles sorted.

        Unused vertices are kept; vertex order within a tile is preserved.
        """
        if self.lifts and all(lf is not None for lf in self.lifts):
            # the lift determines the point, and sorting it is much cheaper
            order = sorted(range(len(self.points)), key=lambda i: tuple(self.lifts[i]))
        else:
            order = sorted(
                range(len(self.points)),
                key=functools.cmp_to_key(lambda i, j: _cmp_points(self.points[i], self.points[j])),
            )
        remap = {old: new for new, old in enumerate(order)}
        # vertex order inside a tile is meaningful (marked corners), so only
        # the tile list itself is sorted
        tiles = [
            Tile(t.type, tuple(remap[v] for v in t.vertices), t.orientation, t.decoration)
            for t in self.tiles
        ]
        tiles.sort(key=lambda t: (sorted(t.vertices), t.vertices, t.type))
        return Patch(
            self.tiling,
            self.provenance,
            self.d,
            [self.points[i] for i in order],
            [self.lifts[i] for i in order],
            tiles,
            self.frame,
            dict(self.meta),
        )

    # --- JSON ---------------------------------------------------------------
    def to_dict(self) -> dict:
        p = self.canonical()
        verts = []
        for pt, lift in zip(p.points, p.lifts):
            verts.append(
                {
                    "lift": None if lift is None else [str(Fraction(x)) for x in lift],
                    "point": [as_scalar(x, p.d).to_json() for x in pt],
                }
            )
        tiles = []
        for t in p.tiles:
            entry = {"type": t.type, "vertices": list(t.vertices), "orientation": t.orientation}
            entry["decoration"] = None if t.decoration is None else [_dec_json(x) for x in t.decoration]
            tiles.append(entry)
        return {
            "schema": PATCH_SCHEMA,
            "tiling": p.tiling,
            "provenance": p.provenance,
            "ring": p.d,
            "frame": p.frame,
            "vertices": verts,
            "tiles": tiles,
            "meta": p.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> Patch:
        if data.get("schema") != PATCH_SCHEMA:
            raise ValueError(f"unsupported patch schema {data.get('schema')!r}")
        d = int(data["ring"])
        points, lifts = [], []
        for v in data["vertices"]:
            points.append(tuple(QuadValue.from_json(c, d) for c in v["point"]))
            lifts.append(None if v["lift"] is None else tuple(Fraction(x) for x in v["lift"]))
        tiles = []
        for t in data["tiles"]:
            dec = t.get("decoration")
            tiles.append(
                Tile(
                    t["type"],
                    tuple(t["vertices"]),
                    int(t.get("orientation", 0)),
                    None if dec is None else tuple(_dec_from_json(x) for x in dec),
                )
            )
        return cls(
            data["tiling"],
            data["provenance"],
            d,
            points,
            lifts,
            tiles,
            data.get("frame", "cartesian"),
            dict(data.get("meta", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> Patch:
        return cls.from_dict(json.loads(text))


def _dec_json(x):
    return None if x is None else list(x)


def _dec_from_json(x):
    return None if x is None else tuple(x)


def patch_from_tiles(
    tiling: str,
    provenance: str,
    d: int,
    polygons: Iterable[tuple[str, Sequence[tuple], int, tuple | None]],
    frame: str = "cartesian",
    lift=None,
) -> Patch:
    """Build a patch from explicit polygons, merging equal vertices exactly."""
    patch = Patch.empty(tiling, provenance, d, frame)
    lookup: dict = {}
    for ttype, pts, orient_, dec in polygons:
        idx = []
        for p in pts:
            p = tuple(as_scalar(x, d) for x in p)
            idx.append(patch.add_point(p, None if lift is None else lift(p), lookup))
        patch.tiles.append(Tile(ttype, tuple(idx), orient_, dec))
    return patch
