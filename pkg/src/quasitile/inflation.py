"""Substitution (inflation) rules and their spectral data.

A rule lists, for every prototile, the child tiles of its inflated copy.
Each child vertex is an affine combination of the parent's vertices with
weights in the quadratic ring. Scaling by the inflation factor and by ring
elements acts on the lattice lift of a module point as a rational matrix, so
substitution runs on integer lift arrays with numpy and stays exact.
Mirrored parents produce mirrored children for free, because the affine
weights do not care about handedness.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .exactnum import TAU, QuadValue, Scalar, as_scalar, sign
from .geometry import clip_convex, orient, polygon_area, vsub
from .lattice import SCHEMES, ProjectionScheme
from .patch import Patch, Tile

RULE_SCHEMA = "quasitile.substitution/1"


@dataclass(frozen=True)
class ChildPlacement:
    type: str
    points: tuple  # exact vertices in the coordinates of the inflated prototile
    reflected: bool = False


@dataclass
class SubstitutionRule:
    name: str
    scheme: str  # key into lattice.SCHEMES; fixes the ring and the frame
    factor: QuadValue
    prototiles: dict  # type -> tuple of exact control points
    children: dict  # type -> list[ChildPlacement]

    @property
    def d(self) -> int:
        return self.factor.d

    @property
    def types(self) -> list[str]:
        return list(self.prototiles)

    @functools.cached_property
    def projection(self) -> ProjectionScheme:
        return SCHEMES[self.scheme]()

    # --- validation ---------------------------------------------------------
    def area_report(self) -> dict[str, tuple[Scalar, Scalar]]:
        """type -> (factor^dim * measure(prototile), sum of child measures), exact."""
        out = {}
        for t, pts in self.prototiles.items():
            lam2 = self.factor ** len(pts[0])  # lengths scale by factor, areas by its square
            lhs = lam2 * _measure(pts)
            rhs = sum((_measure(c.points) for c in self.children[t]), as_scalar(0, self.d))
            out[t] = (lhs, rhs)
        return out

    def check(self) -> list[str]:
        """Problems with the rule; empty when it is a valid dissection."""
        problems = []
        for t, (lhs, rhs) in self.area_report().items():
            if lhs != rhs:
                problems.append(f"{t}: area {rhs} of children differs from {lhs}")
        norm2 = self.projection.par_frame.norm2
        for t, pts in self.prototiles.items():
            big = tuple(tuple(self.factor * x for x in p) for p in pts)
            kids = self.children[t]
            for k, c in enumerate(kids):
                if c.type not in self.prototiles:
                    problems.append(f"{t}: child {k} has unknown type {c.type!r}")
                    continue
                proto = self.prototiles[c.type]
                if len(proto) != len(c.points) or _edge_lengths(proto, norm2) != _edge_lengths(
                    c.points, norm2
                ):
                    problems.append(f"{t}: child {k} is not congruent to {c.type}")
                if len(pts[0]) == 2:
                    if _mirror(proto, c.points) != c.reflected:
                        problems.append(f"{t}: child {k} has a wrong reflection flag")
                    inside = clip_convex(_ccw(c.points), _ccw(big))
                    if len(inside) < 3 or polygon_area(inside) != _measure(c.points):
                        problems.append(f"{t}: child {k} sticks out of the parent")
            if len(pts[0]) == 2:
                for i in range(len(kids)):
                    for j in range(i + 1, len(kids)):
                        common = clip_convex(_ccw(kids[i].points), _ccw(kids[j].points))
                        if len(common) >= 3 and sign(polygon_area(common)) != 0:
                            problems.append(f"{t}: children {i} and {j} overlap")
            else:
                ivs = sorted((min(c.points)[0], max(c.points)[0]) for c in kids)
                for (a0, a1), (b0, b1) in zip(ivs, ivs[1:]):
                    if b0 < a1:
                        problems.append(f"{t}: children overlap")
        return problems

    # --- JSON ----------------------------------------------------------------
    def to_dict(self) -> dict:
        def pts(ps):
            return [[as_scalar(x, self.d).to_json() for x in p] for p in ps]

        return {
            "schema": RULE_SCHEMA,
            "name": self.name,
            "scheme": self.scheme,
            "ring": self.d,
            "factor": self.factor.to_json(),
            "prototiles": {t: pts(p) for t, p in self.prototiles.items()},
            "types": self.types,
            "children": {
                t: [{"type": c.type, "points": pts(c.points), "reflected": c.reflected} for c in kids]
                for t, kids in self.children.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> SubstitutionRule:
        if data.get("schema") != RULE_SCHEMA:
            raise ValueError(f"unsupported rule schema {data.get('schema')!r}")
        d = int(data["ring"])

        def pts(ps):
            return tuple(tuple(QuadValue.from_json(x, d) for x in p) for p in ps)

        types = data.get("types", sorted(data["prototiles"]))
        return cls(
            data["name"],
            data["scheme"],
            QuadValue.from_json(data["factor"], d),
            {t: pts(data["prototiles"][t]) for t in types},
            {
                t: [
                    ChildPlacement(c["type"], pts(c["points"]), bool(c.get("reflected", False)))
                    for c in data["children"][t]
                ]
                for t in types
            },
        )

    @classmethod
    def from_json(cls, text: str) -> SubstitutionRule:
        return cls.from_dict(json.loads(text))


def _measure(pts) -> Scalar:
    if len(pts[0]) == 1:
        return abs(pts[1][0] - pts[0][0])
    return abs(polygon_area(pts))


def _ccw(pts) -> list:
    return list(pts) if sign(polygon_area(pts)) > 0 else list(reversed(pts))


def _edge_lengths(pts, norm2) -> tuple:
    if len(pts[0]) == 1:
        return (abs(pts[1][0] - pts[0][0]),)
    k = len(pts)
    return tuple(norm2(vsub(pts[(i + 1) % k], pts[i])) for i in range(k))


def _mirror(proto, pts) -> bool:
    return orient(*proto[:3]) != orient(*pts[:3])


def _affine_basis(pts) -> list[int]:
    if len(pts[0]) == 1:
        return [0, 1]
    for j in range(2, len(pts)):
        if orient(pts[0], pts[1], pts[j]) != 0:
            return [0, 1, j]
    raise ValueError("degenerate prototile")


def _weights(proto, point, factor) -> list[Scalar]:
    """Affine weights w with point = factor * sum w_i proto[basis_i]."""
    basis = _affine_basis(proto)
    v0 = proto[basis[0]]
    cols = [vsub(proto[b], v0) for b in basis[1:]]
    rhs = [x / factor - y for x, y in zip(point, v0)]
    a = [[cols[j][i] for j in range(len(cols))] for i in range(len(rhs))]
    sol = linalg.solve(a, rhs)
    return [1 - sum(sol, as_scalar(0, factor.d))] + list(sol)


# ---------------------------------------------------------------------------
# compiled form: integer matrices on lattice lifts
# ---------------------------------------------------------------------------


def scalar_matrix(scheme: ProjectionScheme, q: Scalar) -> list[list[Fraction]]:
    """Rational matrix M with lift(q * par(z)) = M z."""
    n = scheme.n
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        img = tuple(q * x for x in scheme.par(e))
        cols.append(scheme.lift(img, integral=False))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


@dataclass
class _Compiled:
    den: int  # common denominator of the weight matrices
    basis: dict  # type -> basis vertex indices
    kids: dict  # type -> list of (child type, reflected, int array (k, b, n, n))


@functools.lru_cache(maxsize=None)
def _compile_cached(text: str) -> _Compiled:
    rule = SubstitutionRule.from_json(text)
    scheme = rule.projection
    basis, kids = {}, {}
    den = 1
    raw = {}
    for t, proto in rule.prototiles.items():
        basis[t] = _affine_basis(proto)
        raw[t] = []
        for c in rule.children[t]:
            mats = []
            for p in c.points:
                w = _weights(proto, p, rule.factor)
                mats.append([scalar_matrix(scheme, wi * rule.factor) for wi in w])
            for per_vertex in mats:
                for m in per_vertex:
                    for row in m:
                        for x in row:
                            den = math.lcm(den, Fraction(x).denominator)
            raw[t].append((c.type, c.reflected, mats))
    for t, lst in raw.items():
        kids[t] = []
        for ctype, refl, mats in lst:
            arr = np.array(
                [[[[int(Fraction(x) * den) for x in row] for row in m] for m in per_vertex] for per_vertex in mats],
                dtype=np.int64,
            )
            kids[t].append((ctype, refl, arr))
    return _Compiled(den, basis, kids)


def _compile(rule: SubstitutionRule) -> _Compiled:
    return _compile_cached(rule.to_json())


# ---------------------------------------------------------------------------
# substitution on patches
# ---------------------------------------------------------------------------


@dataclass
class _State:
    den: int  # lifts are stored multiplied by den
    groups: dict = field(default_factory=dict)  # type -> (lifts (N, k, n) int64, parity (N,) int8)


def _to_state(rule: SubstitutionRule, patch: Patch) -> _State:
    scheme = rule.projection
    lifts = []
    for p, lf in zip(patch.points, patch.lifts):
        if lf is None:
            lf = scheme.lift(p, integral=False)
        lifts.append(tuple(Fraction(x) for x in lf))
    den = 1
    for lf in lifts:
        for x in lf:
            den = math.lcm(den, x.denominator)
    scaled = np.array([[int(x * den) for x in lf] for lf in lifts], dtype=np.int64).reshape(-1, scheme.n)
    st = _State(den)
    by_type: dict[str, list] = {}
    for t in patch.tiles:
        if t.type not in rule.prototiles:
            raise ValueError(f"unknown tile type {t.type!r} for rule {rule.name}")
        if len(t.vertices) != len(rule.prototiles[t.type]):
            raise ValueError(f"tile of type {t.type!r} has {len(t.vertices)} vertices")
        by_type.setdefault(t.type, []).append(t)
    for typ, tiles in by_type.items():
        idx = np.array([t.vertices for t in tiles], dtype=np.int64)
        par = np.array([-1 if t.orientation < 0 else 1 for t in tiles], dtype=np.int8)
        st.groups[typ] = (scaled[idx], par)
    return st


def _step(comp: _Compiled, st: _State) -> _State:
    out: dict[str, list] = {}
    for typ, (lifts, par) in st.groups.items():
        base = lifts[:, comp.basis[typ], :]  # (N, b, n)
        for ctype, refl, mats in comp.kids[typ]:
            # mats (k, b, n, n): child vertex v = sum_i mats[v, i] @ base_i
            num = np.einsum("vimn,Nin->Nvm", mats, base)
            if np.any(num % comp.den):
                raise ArithmeticError("substitution left the lattice module")
            child = num // comp.den
            cpar = -par if refl else par
            out.setdefault(ctype, []).append((child, cpar))
    groups = {}
    for typ, parts in out.items():
        groups[typ] = (np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts]))
    if max((np.abs(g[0]).max() for g in groups.values() if g[0].size), default=0) > 1 << 40:
        raise OverflowError("lift coordinates too large; use fewer steps")
    return _State(st.den, groups)


def _from_state(rule: SubstitutionRule, st: _State, provenance: str, meta: dict) -> Patch:
    scheme = rule.projection
    types = [t for t in rule.types if t in st.groups]
    if not types:
        return Patch.empty(rule.name, provenance, rule.d, scheme.par_frame.name)
    rows = np.concatenate([st.groups[t][0].reshape(-1, scheme.n) for t in types])
    uniq, inv = np.unique(rows, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    points = _points_from_scaled(scheme, uniq, st.den)
    lifts = [tuple(Fraction(int(x), st.den) for x in row) for row in uniq]
    tiles = []
    pos = 0
    for t in types:
        arr, par = st.groups[t]
        k = arr.shape[1]
        ids = inv[pos : pos + arr.shape[0] * k].reshape(-1, k)
        pos += arr.shape[0] * k
        for row, o in zip(ids.tolist(), par.tolist()):
            tiles.append(Tile(t, tuple(row), int(o)))
    patch = Patch(rule.name, provenance, rule.d, points, lifts, tiles, scheme.par_frame.name, meta)
    return patch.canonical()


def _points_from_scaled(scheme: ProjectionScheme, z: np.ndarray, den: int) -> list[tuple]:
    from .cutproject import _coeff_arrays

    cden, a, b = _coeff_arrays(scheme.par_images, scheme.d)
    zs = np.asarray(z, dtype=object)
    pa = zs @ a
    pb = zs @ b
    total = cden * den
    d = scheme.d
    return [
        tuple(QuadValue._new(Fraction(int(x), total), Fraction(int(y), total), d) for x, y in zip(ra, rb))
        for ra, rb in zip(pa, pb)
    ]


def substitute(rule: SubstitutionRule, patch: Patch, steps: int) -> Patch:
    """Apply the rule ``steps`` times; tiles keep unit size, the patch grows."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if steps == 0:
        return patch.canonical()
    comp = _compile(rule)
    st = _to_state(rule, patch)
    for _ in range(steps):
        st = _step(comp, st)
    meta = dict(patch.meta)
    meta["steps"] = int(meta.get("steps", 0)) + steps
    meta["rule"] = rule.name
    return _from_state(rule, st, "inflation", meta)


def substitute_counts(rule: SubstitutionRule, counts: dict[str, int], steps: int) -> dict[str, int]:
    """Type counts after substitution, straight from the matrix."""
    m = substitution_matrix(rule)
    v = np.array([counts.get(t, 0) for t in m.types], dtype=object)
    mat = np.array(m.matrix, dtype=object)
    for _ in range(steps):
        v = mat @ v
    return {t: int(x) for t, x in zip(m.types, v)}


# ---------------------------------------------------------------------------
# shipped rules
# ---------------------------------------------------------------------------


def _rule_from_weights(name, scheme, factor, prototiles, spec) -> SubstitutionRule:
    """spec: type -> list of (child type, list of weight rows on the full vertex list)."""
    children = {}
    for t, kids in spec.items():
        proto = prototiles[t]
        lst = []
        for ctype, rows in kids:
            pts = []
            for w in rows:
                coords = []
                for k in range(len(proto[0])):
                    coords.append(factor * sum((wi * p[k] for wi, p in zip(w, proto)), as_scalar(0, factor.d)))
                pts.append(tuple(coords))
            pts = tuple(pts)
            lst.append(ChildPlacement(ctype, pts, len(pts[0]) == 2 and _mirror(prototiles[ctype], pts)))
        children[t] = lst
    return SubstitutionRule(name, scheme, factor, dict(prototiles), children)


def _q2(a, b=0) -> QuadValue:
    return QuadValue(a, b, 2)


def ab_rule() -> SubstitutionRule:
    """Ammann-Beenker: marked half-square triangles and 45-degree rhombs, factor 1 + sqrt 2."""
    s = _q2(0, Fraction(1, 2))
    one, zero = _q2(1), _q2(0)
    lam = _q2(1, 1)
    tri = ((zero, zero), (one, zero), (one, one))  # right angle at the second vertex
    rho = ((zero, zero), (one, zero), (1 + s, s), (s, s))  # acute angle at the first vertex

    def p(x, y):
        return (as_scalar(x, 2), as_scalar(y, 2))

    h = s  # sqrt(2)/2
    r2 = _q2(0, 1)  # sqrt 2
    tri_kids = [
        ChildPlacement("triangle", (p(1 + h, 1 + h), p(1 + h, h), p(h, h))),
        ChildPlacement("triangle", (p(1 + 2 * h, 0), p(1 + h, h), p(1, 0))),
        ChildPlacement("triangle", (p(1 + 2 * h, 1 + 2 * h), p(1 + h, 1 + h), p(1 + 2 * h, 1))),
        ChildPlacement("rhomb", (p(0, 0), p(1, 0), p(1 + h, h), p(h, h))),
        ChildPlacement("rhomb", (p(1 + 2 * h, 0), p(1 + 2 * h, 1), p(1 + h, 1 + h), p(1 + h, h))),
    ]
    rho_kids = [
        ChildPlacement("triangle", (p(1 + h, 1 + h), p(1 + r2, 1), p(1 + 3 * h, 1 + h))),
        ChildPlacement("triangle", (p(1 + h, 1 + h), p(1 + h, h), p(h, h))),
        ChildPlacement("triangle", (p(1 + r2, 0), p(1 + r2, 1), p(2 + r2, 1))),
        ChildPlacement("triangle", (p(1 + r2, 0), p(1 + h, h), p(1, 0))),
        ChildPlacement("rhomb", (p(1 + h, 1 + h), p(1 + h, h), p(1 + r2, 0), p(1 + r2, 1))),
        ChildPlacement("rhomb", (p(1 + r2, 1), p(2 + r2, 1), p(2 + 3 * h, 1 + h), p(1 + 3 * h, 1 + h))),
        ChildPlacement("rhomb", (p(0, 0), p(1, 0), p(1 + h, h), p(h, h))),
    ]
    protos = {"triangle": tri, "rhomb": rho}
    kids = {}
    for t, lst in (("triangle", tri_kids), ("rhomb", rho_kids)):
        kids[t] = [ChildPlacement(c.type, c.points, _mirror(protos[c.type], c.points)) for c in lst]
    del lam
    return SubstitutionRule("ab", "ab", _q2(1, 1), protos, kids)


def penrose_rule() -> SubstitutionRule:
    """Penrose rhombs cut along their short-edge diagonal into halves, factor tau.

    Half-tiles list the apex first, then the two base corners; two mirror
    halves sharing their base make one rhomb. The corner labels carry the
    arrow decoration through substitution.
    """
    t = TAU
    one, zero = QuadValue(1, 0, 5), QuadValue(0, 0, 5)
    # frame coordinates in the basis (1, zeta), zeta = exp(2 pi i / 5)
    thick = ((zero, zero), (one, zero), (1 - t, one))  # apex angle 108
    thin = ((zero, zero), (one, zero), (t - 1, t - 1))  # apex angle 36
    g = t - 1  # 1 / tau
    h = 1 - g
    # rows are weights on (A, B, C)
    P = (h, g, zero)
    Q = (g, h, zero)
    R = (zero, h, g)
    A, B, C = (one, zero, zero), (zero, one, zero), (zero, zero, one)
    spec = {
        "thick": [("thick", [R, C, A]), ("thick", [Q, R, B]), ("thin", [R, Q, A])],
        "thin": [("thin", [C, P, B]), ("thick", [P, C, A])],
    }
    return _rule_from_weights("penrose", "penrose", t, {"thick": thick, "thin": thin}, spec)


def fibonacci_rule() -> SubstitutionRule:
    """A -> AB, B -> A on intervals of lengths tau and 1."""
    t = TAU
    zero, one = QuadValue(0, 0, 5), QuadValue(1, 0, 5)
    protos = {"A": ((zero,), (t,)), "B": ((zero,), (one,))}
    kids = {
        "A": [ChildPlacement("A", ((zero,), (t,))), ChildPlacement("B", ((t,), (t + 1,)))],
        "B": [ChildPlacement("A", ((zero,), (t,)))],
    }
    return SubstitutionRule("fibonacci", "fibonacci", t, protos, kids)


RULES = {"ab": ab_rule, "penrose": penrose_rule, "fibonacci": fibonacci_rule}


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------


def _seed(rule: SubstitutionRule, tiles: Sequence[tuple[str, Sequence[tuple], int]], name: str) -> Patch:
    scheme = rule.projection
    patch = Patch.empty(rule.name, "seed", rule.d, scheme.par_frame.name)
    lookup: dict = {}
    for typ, pts, o in tiles:
        idx = []
        for p in pts:
            p = tuple(as_scalar(x, rule.d) for x in p)
            idx.append(patch.add_point(p, scheme.lift(p, integral=False), lookup))
        patch.tiles.append(Tile(typ, tuple(idx), o))
    patch.meta = {"seed": name, "steps": 0}
    return patch.canonical()


def seed_names(rule: SubstitutionRule) -> list[str]:
    extra = {"ab": ["square", "octagon"], "penrose": ["sun", "star"], "fibonacci": []}
    return [f"tile:{t}" for t in rule.types] + extra.get(rule.name, [])


def seed_patch(rule: SubstitutionRule, name: str) -> Patch:
    """Named starting patch: ``tile:<type>`` or a rule-specific symmetric seed."""
    if name.startswith("tile:"):
        t = name[5:]
        if t not in rule.prototiles:
            raise ValueError(f"unknown tile type {t!r} for rule {rule.name}")
        return _seed(rule, [(t, rule.prototiles[t], 1)], name)
    if rule.name == "ab" and name == "square":
        z, o = _q2(0), _q2(1)
        return _seed(
            rule,
            [("triangle", ((z, z), (o, z), (o, o)), 1), ("triangle", ((z, z), (z, o), (o, o)), -1)],
            name,
        )
    if rule.name == "ab" and name == "octagon":
        a = rule.projection.par_images
        tiles = []
        for k in range(8):
            u = _signed(a, k)
            v = _signed(a, k + 1)
            tiles.append(("rhomb", ((_q2(0), _q2(0)), u, tuple(x + y for x, y in zip(u, v)), v), 1))
        return _seed(rule, tiles, name)
    if rule.name == "penrose" and name in ("sun", "star"):
        from .lattice import _zeta_powers

        zeta = _zeta_powers()

        def unit(j):  # direction 36 j degrees
            j %= 10
            if j % 2 == 0:
                return zeta[j // 2]
            return tuple(-x for x in zeta[((j - 5) // 2) % 5])

        zero = (QuadValue(0, 0, 5), QuadValue(0, 0, 5))
        tiles = []
        if name == "sun":
            for i in range(10):
                b, c = unit(i), unit(i + 1)
                if i % 2 == 0:
                    b, c = c, b
                tiles.append(("thin", (zero, b, c), _orient_sign(rule, "thin", (zero, b, c))))
        else:
            for i in range(5):
                u, v = unit(2 * i), unit(2 * i + 2)
                far = tuple(x + y for x, y in zip(u, v))
                for apex in (u, v):
                    pts = (apex, zero, far)
                    tiles.append(("thick", pts, _orient_sign(rule, "thick", pts)))
        return _seed(rule, tiles, name)
    raise ValueError(f"unknown seed {name!r} for rule {rule.name}; choose from {seed_names(rule)}")


def _signed(vectors, k):
    k %= 2 * len(vectors)
    v = vectors[k % len(vectors)]
    return v if k < len(vectors) else tuple(-x for x in v)


def _orient_sign(rule, typ, pts) -> int:
    return -1 if _mirror(rule.prototiles[typ], pts) else 1


def fibonacci_word(patch: Patch) -> str:
    """Letters of a one-dimensional patch read from left to right."""
    tiles = sorted(patch.tiles, key=lambda t: min(patch.points[v][0] for v in t.vertices))
    return "".join(t.type for t in tiles)


def word_substitution(word: str, steps: int, images=None) -> str:
    images = images or {"A": "AB", "B": "A"}
    for _ in range(steps):
        word = "".join(images[c] for c in word)
    return word


# ---------------------------------------------------------------------------
# pairing of half tiles
# ---------------------------------------------------------------------------


def pair_halves(patch: Patch, template=None) -> Patch:
    """Join mirror half-tiles across their common base into whole rhombs.

    Halves without a partner (on the rim) are dropped. Each rhomb lists its
    vertices ccw starting from the first base corner; with a ``template``
    (see ``matching``) the edges receive their arrow decorations.
    """
    by_base: dict[tuple, list[int]] = {}
    for k, t in enumerate(patch.tiles):
        _, b, c = t.vertices
        by_base.setdefault((t.type, b, c), []).append(k)
    out = Patch.empty(patch.tiling, patch.provenance, patch.d, patch.frame)
    out.points = list(patch.points)
    out.lifts = list(patch.lifts)
    out.meta = dict(patch.meta)
    out.meta["paired"] = True
    for (typ, b, c), ks in sorted(by_base.items()):
        if len(ks) != 2:
            continue
        t1, t2 = patch.tiles[ks[0]], patch.tiles[ks[1]]
        a1 = t1.vertices[0]
        pb, pc, pa1 = patch.points[b], patch.points[c], patch.points[a1]
        # ccw order b -> a_right -> c -> a_left
        if orient(pb, pc, pa1) < 0:
            right, left = t1, t2
        else:
            right, left = t2, t1
        verts = (b, right.vertices[0], c, left.vertices[0])
        dec = None
        if template is not None:
            dec = template.rhomb_decoration(typ, right, left)
        out.tiles.append(Tile(typ, verts, right.orientation, dec))
    return out.canonical()


# ---------------------------------------------------------------------------
# substitution matrix and frequencies
# ---------------------------------------------------------------------------


@dataclass
class SubstitutionMatrix:
    types: list
    matrix: list  # M[i][j] = number of type-i children of a type-j tile
    d: int

    def char_poly(self) -> list[int]:
        """Integer coefficients of det(x I - M), highest degree first."""
        n = len(self.types)
        m = [[Fraction(x) for x in row] for row in self.matrix]
        # Faddeev-LeVerrier
        coeffs = [Fraction(1)]
        mk = [[Fraction(0)] * n for _ in range(n)]
        ident = linalg.identity(n)
        for k in range(1, n + 1):
            mk = linalg.matmul(m, [[mk[i][j] + coeffs[-1] * ident[i][j] for j in range(n)] for i in range(n)])
            ck = -sum(mk[i][i] for i in range(n)) / k
            coeffs.append(ck)
        return [int(c) for c in coeffs]

    def perron_value(self) -> Scalar:
        """Exact Perron root, located as a root of a rational quadratic factor."""
        poly = self.char_poly()
        mat = np.array(self.matrix, dtype=float)
        roots = np.roots(poly)
        r = max(roots, key=lambda z: z.real).real
        # the Perron root is rational or quadratic over Q: find its factor
        for other in roots:
            s, p = r + other.real, r * other.real
            si, pi = round(s), round(p)
            if abs(other.imag) > 1e-9 or abs(s - si) > 1e-6 or abs(p - pi) > 1e-6:
                continue
            disc = si * si - 4 * pi
            root = _ring_sqrt(disc, self.d)
            if root is None:
                continue
            cand = (as_scalar(si, self.d) + root) * Fraction(1, 2)
            if _poly_eval(poly, cand) == 0:
                return cand
        for k in range(-100, 101):
            if _poly_eval(poly, Fraction(k)) == 0 and abs(k - r) < 1e-9:
                return as_scalar(k, self.d)
        del mat
        raise ValueError("Perron root is not in the quadratic ring")

    def is_primitive(self) -> bool:
        n = len(self.types)
        m = (np.array(self.matrix) > 0).astype(np.int64)
        p = m.copy()
        for _ in range(n * n - 2 * n + 2):
            if np.all(p > 0):
                return True
            p = ((p @ m) > 0).astype(np.int64)
        return bool(np.all(p > 0))

    def to_dict(self) -> dict:
        return {"types": list(self.types), "matrix": [list(r) for r in self.matrix]}


def _ring_sqrt(disc: int, d: int) -> Scalar | None:
    if disc < 0:
        return None
    r = math.isqrt(disc)
    if r * r == disc:
        return as_scalar(r, d)
    D = 2 if d == 2 else 5
    if disc % D == 0:
        k2 = disc // D
        k = math.isqrt(k2)
        if k * k == k2:
            unit = QuadValue(0, 1, 2) if d == 2 else QuadValue(-1, 2, 5)  # sqrt 2 or sqrt 5
            return unit * k
    return None


def _poly_eval(poly: Sequence[int], x: Scalar) -> Scalar:
    acc = 0
    for c in poly:
        acc = acc * x + c
    return acc


def substitution_matrix(rule: SubstitutionRule) -> SubstitutionMatrix:
    types = rule.types
    pos = {t: i for i, t in enumerate(types)}
    m = [[0] * len(types) for _ in types]
    for j, t in enumerate(types):
        for c in rule.children[t]:
            m[pos[c.type]][j] += 1
    return SubstitutionMatrix(types, m, rule.d)


def tile_frequencies(rule: SubstitutionRule) -> dict[str, Scalar]:
    """Normalised right Perron eigenvector, exact; raises for non-primitive rules."""
    sm = substitution_matrix(rule)
    if not sm.is_primitive():
        raise ValueError("substitution matrix is not primitive")
    lam = sm.perron_value()
    n = len(sm.types)
    a = [[as_scalar(sm.matrix[i][j], rule.d) - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    null = linalg.nullspace(a, n)
    if len(null) != 1:
        raise ValueError("Perron eigenspace is not one-dimensional")
    v = null[0]
    total = sum(v, as_scalar(0, rule.d))
    freqs = [x / total for x in v]
    if any(sign(f) <= 0 for f in freqs):
        raise ValueError("Perron eigenvector is not positive")
    return dict(zip(sm.types, freqs))


# ---------------------------------------------------------------------------
# repetitivity
# ---------------------------------------------------------------------------


@dataclass
class RepetitivityReport:
    probe_radius: float
    margin: float
    centers: int  # interior centres examined
    classes: int
    gaps: dict  # class id -> largest distance from an occurrence to the nearest other one
    singletons: list  # class ids occurring once

    @property
    def max_gap(self) -> float:
        return max(self.gaps.values(), default=0.0)

    @property
    def ok(self) -> bool:
        return not self.singletons and self.classes > 0

    def to_dict(self) -> dict:
        return {
            "probe_radius": self.probe_radius,
            "margin": self.margin,
            "centers": self.centers,
            "classes": self.classes,
            "max_gap": self.max_gap,
            "singletons": len(self.singletons),
            "ok": self.ok,
        }


def _cartesian(patch: Patch) -> np.ndarray:
    from .cutproject import cartesian_matrix

    return patch.float_points(cartesian_matrix(patch))


def boundary_vertices(patch: Patch) -> list[int]:
    out = set()
    for (a, b), uses in patch.edges().items():
        if len(uses) == 1:
            out.update((a, b))
    return sorted(out)


def repetitivity_check(patch: Patch, probe_radius: float = 2.0, margin: float | None = None) -> RepetitivityReport:
    """Recurrence of every radius-``probe_radius`` vertex neighbourhood.

    A neighbourhood is the set of tiles with all vertices in the closed disk
    around a vertex, keyed exactly by tile types and lift differences (so
    equal keys mean geometrically equal patches up to translation; corner
    markings are ignored). Neighbourhoods are complete at centres
    at least ``probe_radius`` from the rim; classes seen at centres at least
    ``margin`` from the rim must recur among the complete ones.
    """
    r = float(probe_radius)
    if r <= 0:
        raise ValueError("probe radius must be positive")
    margin = 3 * r if margin is None else float(margin)
    xy = _cartesian(patch)
    if len(xy) == 0:
        raise ValueError("patch too small relative to probe radius")
    extent = float(np.ptp(xy, axis=0).max())
    if extent < 10 * r:
        raise ValueError(f"patch too small relative to probe radius (extent {extent:.3g} < {10 * r:g})")
    rim = boundary_vertices(patch)
    if rim:
        rim_xy = xy[rim]
        dist_rim = np.full(len(xy), np.inf)
        for lo in range(0, len(xy), 4096):
            blk = xy[lo : lo + 4096]
            dd = np.sqrt(((blk[:, None, :] - rim_xy[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
            dist_rim[lo : lo + 4096] = dd
    else:
        dist_rim = np.full(len(xy), np.inf)
    # tiles by the grid cell of their first vertex
    cell = max(r, 1.0)
    grid: dict[tuple, list[int]] = {}
    for ti, t in enumerate(patch.tiles):
        c = xy[t.vertices[0]]
        grid.setdefault((int(math.floor(c[0] / cell)), int(math.floor(c[1] / cell))), []).append(ti)
    lifts = [tuple(Fraction(x) for x in lf) for lf in patch.lifts]
    complete = np.nonzero(dist_rim >= r)[0]
    keys: dict[tuple, int] = {}
    where: dict[int, list[int]] = {}
    interior_classes = set()
    interior = 0
    norm2 = _norm2_for(patch)
    r2 = Fraction(probe_radius) ** 2 if not isinstance(probe_radius, QuadValue) else probe_radius**2
    for v in complete.tolist():
        cx, cy = xy[v]
        gx, gy = int(math.floor(cx / cell)), int(math.floor(cy / cell))
        members = []
        for dx in (-2, -1, 0, 1, 2):
            for dy in (-2, -1, 0, 1, 2):
                for ti in grid.get((gx + dx, gy + dy), ()):
                    t = patch.tiles[ti]
                    ok = True
                    for w in t.vertices:
                        dist = math.hypot(xy[w][0] - cx, xy[w][1] - cy)
                        if dist > r + 1e-9:
                            ok = False
                            break
                        if dist > r - 1e-9:
                            diff = vsub(patch.points[w], patch.points[v])
                            if sign(norm2(diff) - r2) > 0:
                                ok = False
                                break
                    if ok:
                        members.append(ti)
        base = lifts[v]
        key = tuple(
            sorted(
                (patch.tiles[ti].type, tuple(sorted(tuple(a - b for a, b in zip(lifts[w], base)) for w in patch.tiles[ti].vertices)))
                for ti in members
            )
        )
        cid = keys.setdefault(key, len(keys))
        where.setdefault(cid, []).append(v)
        if dist_rim[v] >= margin:
            interior_classes.add(cid)
            interior += 1
    gaps, singletons = {}, []
    for cid in sorted(interior_classes):
        occ = xy[where[cid]]
        if len(occ) < 2:
            singletons.append(cid)
            gaps[cid] = math.inf
            continue
        best = 0.0
        for lo in range(0, len(occ), 2048):
            blk = occ[lo : lo + 2048]
            dd = np.sqrt(((blk[:, None, :] - occ[None, :, :]) ** 2).sum(axis=2))
            dd[dd < 1e-12] = np.inf
            best = max(best, float(dd.min(axis=1).max()))
        gaps[cid] = best
    return RepetitivityReport(r, margin, interior, len(interior_classes), gaps, singletons)


def _norm2_for(patch: Patch):
    from .cutproject import _frame_of

    if patch.dim == 1:
        return lambda v: v[0] * v[0]
    return _frame_of(patch)


def square_lattice_patch(size: int) -> Patch:
    """Periodic unit-square tiling of a size x size block (control input)."""
    patch = Patch.empty("square", "periodic", 2, "cartesian")
    lookup: dict = {}
    for i in range(size):
        for j in range(size):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            idx = tuple(
                patch.add_point((as_scalar(x, 2), as_scalar(y, 2)), (Fraction(x), Fraction(y)), lookup)
                for x, y in corners
            )
            patch.tiles.append(Tile("square", idx, 1))
    return patch.canonical()


def face_to_face_defects(patch: Patch, tol: float = 1e-9) -> list[str]:
    """Local overlap, gap and edge-to-edge defects of a planar patch.

    Checks that each edge is used at most twice and in opposite directions
    (tiles taken ccw), that no vertex sits inside another tile's edge, and that
    every vertex away from the rim has a full turn of corner angles.
    """
    xy = _cartesian(patch)
    problems = []
    directed: dict[tuple[int, int], int] = {}
    angle = np.zeros(len(xy))
    for ti, t in enumerate(patch.tiles):
        vs = list(t.vertices)
        pts = xy[vs]
        area2 = float(np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - np.roll(pts[:, 0], -1) * pts[:, 1]))
        if area2 < 0:
            vs = vs[::-1]
        k = len(vs)
        for i in range(k):
            a, b = vs[i], vs[(i + 1) % k]
            if (a, b) in directed:
                problems.append(f"edge {a}-{b} used twice in the same direction")
            directed[(a, b)] = ti
            prev, nxt = xy[vs[i - 1]] - xy[vs[i]], xy[vs[(i + 1) % k]] - xy[vs[i]]
            ang = math.atan2(prev[0] * nxt[1] - prev[1] * nxt[0], prev @ nxt)
            angle[vs[i]] += abs(ang)
    rim = set()
    for a, b in directed:
        if (b, a) not in directed:
            rim.update((a, b))
    for v in range(len(xy)):
        if v not in rim and angle[v] > 0 and abs(angle[v] - 2 * math.pi) > 1e-6:
            problems.append(f"vertex {v} has corner angle sum {angle[v]:.6f}")
    # vertices strictly inside edges
    cell = 1.0
    grid: dict[tuple, list[int]] = {}
    for v, (x, y) in enumerate(xy):
        grid.setdefault((int(math.floor(x / cell)), int(math.floor(y / cell))), []).append(v)
    for a, b in directed:
        if a > b and (b, a) in directed:
            continue
        pa, pb = xy[a], xy[b]
        seg = pb - pa
        ln = float(np.hypot(*seg))
        lo = np.floor(np.minimum(pa, pb) / cell).astype(int)
        hi = np.floor(np.maximum(pa, pb) / cell).astype(int)
        for gx in range(lo[0], hi[0] + 1):
            for gy in range(lo[1], hi[1] + 1):
                for v in grid.get((gx, gy), ()):
                    if v in (a, b):
                        continue
                    w = xy[v] - pa
                    along = float(w @ seg) / ln
                    off = abs(float(seg[0] * w[1] - seg[1] * w[0])) / ln
                    if off < tol and tol < along < ln - tol:
                        problems.append(f"vertex {v} lies inside edge {a}-{b}")
    return problems


def merge_triangles(patch: Patch) -> Patch:
    """Join Ammann-Beenker triangle pairs sharing their hypotenuse into squares.

    The square keeps the marked diagonal as its first and third vertex.
    Unpaired triangles (on the rim) are kept as they are.
    """
    by_hyp: dict[tuple, list[int]] = {}
    for k, t in enumerate(patch.tiles):
        if t.type == "triangle":
            o, _, q = t.vertices
            by_hyp.setdefault((o, q), []).append(k)
    out = Patch.empty(patch.tiling, patch.provenance, patch.d, patch.frame)
    out.points = list(patch.points)
    out.lifts = list(patch.lifts)
    out.meta = dict(patch.meta)
    used = set()
    for (o, q), ks in sorted(by_hyp.items()):
        if len(ks) != 2:
            continue
        t1, t2 = patch.tiles[ks[0]], patch.tiles[ks[1]]
        p1, p2 = t1.vertices[1], t2.vertices[1]
        if orient(patch.points[o], patch.points[p1], patch.points[q]) < 0:
            p1, p2 = p2, p1
        out.tiles.append(Tile("square", (o, p1, q, p2), 1))
        used.update(ks)
    for k, t in enumerate(patch.tiles):
        if k not in used:
            out.tiles.append(t)
    return out.canonical()
