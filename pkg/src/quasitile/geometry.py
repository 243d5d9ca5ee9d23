"""Exact planar (and linear) geometry in coordinate frames over Q(sqrt d).

Points are tuples of exact scalars given in the coordinates of a
:class:`Frame`. A frame may be oblique; the metric lives in its Gram
matrix. Orientation predicates and areas use the coordinate cross product,
which differs from the Euclidean one by the positive factor ``det(basis)``,
so every sign test is unaffected and areas are reported in frame units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactnum import QuadValue, Scalar, as_scalar, sign, to_float

Point = tuple


# ---------------------------------------------------------------------------
# frames
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """Coordinate frame of a physical or internal space.

    ``gram[i][j]`` is the Euclidean inner product of basis vectors i and j;
    ``cartesian`` holds float Cartesian images of the basis (columns), used
    only for rendering and float bounds.
    """

    name: str
    d: int
    gram: tuple
    cartesian: tuple = field(compare=False)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def dot(self, u: Point, v: Point) -> Scalar:
        total: Scalar = 0
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j, vj in enumerate(v):
                if vj == 0:
                    continue
                g = self.gram[i][j]
                if g != 0:
                    total = total + ui * g * vj
        return total

    def norm2(self, u: Point) -> Scalar:
        return self.dot(u, u)

    def basis_matrix(self) -> np.ndarray:
        return np.array(self.cartesian, dtype=float).reshape(self.dim, self.dim).T

    def to_cartesian(self, p: Point) -> np.ndarray:
        return self.basis_matrix() @ np.array([to_float(x) for x in p])

    def det_basis(self) -> float:
        return float(np.linalg.det(self.basis_matrix()))

    def coords_bound(self, radius: float) -> float:
        """Bound on |coordinate| for points of Euclidean norm <= radius."""
        inv = np.linalg.inv(self.basis_matrix())
        return radius * float(np.abs(inv).sum(axis=1).max())

    def zero(self) -> Point:
        return tuple(QuadValue(0, 0, self.d) for _ in range(self.dim))


def cartesian_frame(d: int, dim: int = 2, name: str = "cartesian") -> Frame:
    gram = tuple(tuple(QuadValue(int(i == j), 0, d) for j in range(dim)) for i in range(dim))
    cart = tuple(tuple(float(i == j) for i in range(dim)) for j in range(dim))
    return Frame(name, d, gram, cart)


# ---------------------------------------------------------------------------
# vector helpers
# ---------------------------------------------------------------------------


def vadd(u: Point, v: Point) -> Point:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Point, v: Point) -> Point:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c: Scalar, u: Point) -> Point:
    return tuple(c * x for x in u)


def vneg(u: Point) -> Point:
    return tuple(-x for x in u)


def cross(u: Point, v: Point) -> Scalar:
    return u[0] * v[1] - u[1] * v[0]


def orient(a: Point, b: Point, c: Point) -> int:
    return sign(cross(vsub(b, a), vsub(c, a)))


def lex_key(p: Point) -> tuple:
    """Float key for deterministic ordering (ties broken by exact coefficients)."""
    return tuple(to_float(x) for x in p) + tuple(_exact_key(x) for x in p)


def _exact_key(x: Scalar) -> tuple:
    if isinstance(x, QuadValue):
        return (Fraction(x.a), Fraction(x.b))
    return (Fraction(x), Fraction(0))


def lex_less(p: Point, q: Point) -> bool:
    for x, y in zip(p, q):
        s = sign(x - y)
        if s:
            return s < 0
    return False


def _cmp_points(p: Point, q: Point) -> int:
    for x, y in zip(p, q):
        s = sign(x - y)
        if s:
            return s
    return 0


def sort_points(points: Iterable[Point]) -> list[Point]:
    import functools

    return sorted(points, key=functools.cmp_to_key(_cmp_points))


# ---------------------------------------------------------------------------
# polygons
# ---------------------------------------------------------------------------


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Strictly convex hull, counter-clockwise, starting at the lexicographic minimum."""
    pts = sort_points(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def polygon_area2(poly: Sequence[Point]) -> Scalar:
    """Twice the signed area in frame units (positive for ccw)."""
    total: Scalar = 0
    n = len(poly)
    for i in range(n):
        total = total + cross(poly[i], poly[(i + 1) % n])
    return total


def polygon_area(poly: Sequence[Point]) -> Scalar:
    return polygon_area2(poly) * Fraction(1, 2)


def point_in_convex(poly: Sequence[Point], p: Point, strict: bool = False) -> bool:
    n = len(poly)
    for i in range(n):
        s = orient(poly[i], poly[(i + 1) % n], p)
        if s < 0 or (strict and s == 0):
            return False
    return True


def _line_intersection(p: Point, q: Point, a: Point, b: Point) -> Point:
    # intersection of segment pq with the line ab
    d1 = cross(vsub(b, a), vsub(p, a))
    d2 = cross(vsub(b, a), vsub(q, a))
    t = d1 / (d1 - d2)
    return vadd(p, vscale(t, vsub(q, p)))


def clip_convex(subject: Sequence[Point], clip: Sequence[Point]) -> list[Point]:
    """Exact intersection of two ccw convex polygons (may be empty)."""
    out = list(subject)
    n = len(clip)
    for i in range(n):
        if not out:
            break
        a, b = clip[i], clip[(i + 1) % n]
        inp = out
        out = []
        m = len(inp)
        for j in range(m):
            p, q = inp[j], inp[(j + 1) % m]
            sp = orient(a, b, p)
            sq = orient(a, b, q)
            if sp >= 0:
                out.append(p)
            if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
                out.append(_line_intersection(p, q, a, b))
    # remove duplicates and collinear points
    cleaned: list[Point] = []
    for p in out:
        if not cleaned or p != cleaned[-1]:
            cleaned.append(p)
    if len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
        cleaned.pop()
    if len(cleaned) < 3:
        return []
    return convex_hull(cleaned)


def centroid_float(poly: Sequence[Point]) -> np.ndarray:
    arr = np.array([[to_float(x) for x in p] for p in poly])
    return arr.mean(axis=0)


# ---------------------------------------------------------------------------
# convex regions with half-open boundary policy
# ---------------------------------------------------------------------------


def _lex_positive(coeffs: Sequence[Scalar]) -> bool:
    for c in coeffs:
        s = sign(c)
        if s:
            return s > 0
    return False


@dataclass(frozen=True)
class Constraint:
    """Half-space ``sum(coeffs[i] * y[i]) + const >= 0``.

    ``closed`` says whether the boundary belongs to the region under the
    half-open policy: a facet is kept iff its outward normal (``-coeffs``)
    is lexicographically negative.
    """

    coeffs: tuple
    const: Scalar
    closed: bool

    def value(self, y: Point) -> Scalar:
        total = self.const
        for c, x in zip(self.coeffs, y):
            total = total + c * x
        return total


@dataclass(frozen=True)
class ConvexRegion:
    """A full-dimensional convex polytope in a 1D or 2D frame.

    In 2D ``vertices`` is the ccw vertex cycle; in 1D it is ``(lo, hi)``
    as 1-tuples.
    """

    vertices: tuple
    dim: int

    @classmethod
    def from_points(cls, points: Iterable[Point]) -> ConvexRegion:
        pts = list(points)
        dim = len(pts[0])
        if dim == 1:
            lo = min(pts, key=lambda p: to_float(p[0]))
            hi = max(pts, key=lambda p: to_float(p[0]))
            # exact min/max
            for p in pts:
                if sign(p[0] - lo[0]) < 0:
                    lo = p
                if sign(p[0] - hi[0]) > 0:
                    hi = p
            return cls((lo, hi), 1)
        return cls(tuple(convex_hull(pts)), 2)

    @property
    def is_degenerate(self) -> bool:
        if self.dim == 1:
            return sign(self.vertices[1][0] - self.vertices[0][0]) == 0
        return len(self.vertices) < 3

    def measure(self) -> Scalar:
        """Length (1D) or area in frame units (2D)."""
        if self.dim == 1:
            return self.vertices[1][0] - self.vertices[0][0]
        return polygon_area(self.vertices)

    def constraints(self) -> list[Constraint]:
        if self.dim == 1:
            lo, hi = self.vertices[0][0], self.vertices[1][0]
            return [
                Constraint((1,), -lo, True),
                Constraint((-1,), hi, False),
            ]
        out = []
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            e = vsub(b, a)
            # cross(e, y - a) = -e1*y0 + e0*y1 - cross(e, a)
            coeffs = (-e[1], e[0])
            const = -cross(e, a)
            out.append(Constraint(coeffs, const, _lex_positive(coeffs)))
        return out

    def contains(self, y: Point, policy: str = "halfopen") -> bool:
        for c in self.constraints():
            s = sign(c.value(y))
            if s < 0:
                return False
            if s == 0:
                if policy == "open" or (policy == "halfopen" and not c.closed):
                    return False
        return True

    def on_boundary(self, y: Point) -> bool:
        return self.contains(y, "closed") and not self.contains(y, "open")

    def translate(self, t: Point) -> ConvexRegion:
        return ConvexRegion(tuple(vadd(v, t) for v in self.vertices), self.dim)

    def negate(self) -> ConvexRegion:
        return ConvexRegion.from_points([vneg(v) for v in self.vertices])

    def reflect_about(self, c: Point) -> ConvexRegion:
        """The region ``c - self``."""
        return ConvexRegion.from_points([vsub(c, v) for v in self.vertices])

    def bbox_coords(self) -> tuple[np.ndarray, np.ndarray]:
        arr = np.array([[to_float(x) for x in v] for v in self.vertices])
        return arr.min(axis=0), arr.max(axis=0)

    def float_vertices(self) -> np.ndarray:
        return np.array([[to_float(x) for x in v] for v in self.vertices])


def box_region(lo: Sequence[Scalar], hi: Sequence[Scalar], d: int) -> ConvexRegion:
    lo = tuple(as_scalar(x, d) for x in lo)
    hi = tuple(as_scalar(x, d) for x in hi)
    if len(lo) == 1:
        return ConvexRegion(((lo[0],), (hi[0],)), 1)
    return ConvexRegion(
        ((lo[0], lo[1]), (hi[0], lo[1]), (hi[0], hi[1]), (lo[0], hi[1])), 2
    )


def interval_intersection(a: ConvexRegion, b: ConvexRegion) -> ConvexRegion | None:
    lo = a.vertices[0] if sign(a.vertices[0][0] - b.vertices[0][0]) >= 0 else b.vertices[0]
    hi = a.vertices[1] if sign(a.vertices[1][0] - b.vertices[1][0]) <= 0 else b.vertices[1]
    if sign(hi[0] - lo[0]) <= 0:
        return None
    return ConvexRegion((lo, hi), 1)


def intersect_regions(a: ConvexRegion, b: ConvexRegion) -> ConvexRegion | None:
    if a.dim == 1:
        return interval_intersection(a, b)
    poly = clip_convex(a.vertices, b.vertices)
    if not poly:
        return None
    return ConvexRegion(tuple(poly), 2)


def regular_polygon_float(n: int, r: float = 1.0, phase: float = 0.0) -> np.ndarray:
    ang = phase + 2 * math.pi * np.arange(n) / n
    return np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)
