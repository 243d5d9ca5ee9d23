"""Arrow decorations on Penrose rhombs and local legality checks.

Every rhomb edge carries a single or double arrow. A rhomb is symmetric
about one diagonal (the base ``b``-``c`` of its two halves); the template
fixes, per tile type, the arrow on the two legs of a half. Decorations are
stored per edge as ``(kind, direction)`` with kind 1 (single) or 2 (double)
and direction +1 when the arrow points from ``vertices[i]`` to
``vertices[i+1]``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .patch import Patch, Tile

SINGLE, DOUBLE = 1, 2


@dataclass(frozen=True)
class EdgeDecoration:
    kind: int  # SINGLE or DOUBLE
    direction: int  # +1 along the stored edge, -1 against it

    def __post_init__(self):
        if self.kind not in (SINGLE, DOUBLE) or self.direction not in (1, -1):
            raise ValueError(f"bad decoration {self.kind}, {self.direction}")

    def canonical(self, a: int, b: int) -> tuple[int, int]:
        """(kind, direction) relative to the edge oriented from min(a, b) to max(a, b)."""
        return (self.kind, self.direction if a < b else -self.direction)


@dataclass(frozen=True)
class ArrowTemplate:
    """Arrow on the legs of a half rhomb: type -> ((kind, to_apex) for leg AB, same for AC)."""

    legs: tuple  # sorted tuple of (type, ((kind, to_apex), (kind, to_apex)))

    def leg(self, typ: str, which: int) -> tuple[int, bool]:
        return dict(self.legs)[typ][which]

    def rhomb_decoration(self, typ: str, right: Tile | None = None, left: Tile | None = None) -> tuple:
        """Decorations of the rhomb (b, a_right, c, a_left) assembled from two mirror halves."""
        (k_ab, ab_apex), (k_ac, ac_apex) = dict(self.legs)[typ]
        return (
            (k_ab, 1 if ab_apex else -1),  # b -> a_right
            (k_ac, -1 if ac_apex else 1),  # a_right -> c
            (k_ac, 1 if ac_apex else -1),  # c -> a_left
            (k_ab, -1 if ab_apex else 1),  # a_left -> b
        )

    def to_dict(self) -> dict:
        return {t: [[k, bool(a)] for k, a in legs] for t, legs in self.legs}


def make_template(spec: dict) -> ArrowTemplate:
    return ArrowTemplate(tuple(sorted((t, tuple((int(k), bool(a)) for k, a in v)) for t, v in spec.items())))


# ---------------------------------------------------------------------------
# legality
# ---------------------------------------------------------------------------


@dataclass
class Violation:
    edge: tuple[int, int]
    tiles: tuple
    reason: str
    location: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "edge": list(self.edge),
            "tiles": list(self.tiles),
            "reason": self.reason,
            "location": [round(x, 9) for x in self.location],
        }


@dataclass
class LegalityReport:
    violations: list
    interior_edges: int

    @property
    def legal(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "legal": self.legal,
            "interior_edges": self.interior_edges,
            "violations": [v.to_dict() for v in self.violations],
        }


def _xy(patch: Patch) -> np.ndarray:
    from .cutproject import cartesian_matrix

    return patch.float_points(cartesian_matrix(patch))


def check_legality(patch: Patch) -> LegalityReport:
    """Edge-to-edge adjacency plus equal arrows on every shared edge."""
    from .inflation import face_to_face_defects

    for t in patch.tiles:
        if t.decoration is None or any(x is None for x in t.decoration):
            raise ValueError("check_legality needs decorated tiles")
    xy = _xy(patch)
    violations = []
    for msg in face_to_face_defects(patch):
        violations.append(Violation((-1, -1), (), msg, (float("nan"), float("nan"))))
    shared = 0
    for (a, b), uses in sorted(patch.edges().items()):
        if len(uses) > 2:
            mid = tuple((xy[a] + xy[b]) / 2)
            violations.append(Violation((a, b), tuple(u[0] for u in uses), "edge shared by more than two tiles", mid))
            continue
        if len(uses) < 2:
            continue
        shared += 1
        marks = []
        for ti, pos in uses:
            t = patch.tiles[ti]
            u, v = t.vertices[pos], t.vertices[(pos + 1) % len(t.vertices)]
            kind, direction = t.decoration[pos]
            marks.append(EdgeDecoration(kind, direction).canonical(u, v))
        if marks[0] != marks[1]:
            mid = tuple(float(x) for x in (xy[a] + xy[b]) / 2)
            reason = "arrow kinds differ" if marks[0][0] != marks[1][0] else "arrow directions differ"
            violations.append(Violation((a, b), tuple(u[0] for u in uses), reason, mid))
    return LegalityReport(violations, shared)


def reflect_tile(patch: Patch, index: int) -> Patch:
    """Copy with one rhomb reflected in place across its non-symmetric diagonal.

    The tile covers the same region afterwards, but its arrows are mirrored,
    which swaps single and double arrows on adjacent edges.
    """
    t = patch.tiles[index]
    b, ar, c, al = t.vertices
    tiles = list(patch.tiles)
    tiles[index] = Tile(t.type, (c, ar, b, al), -t.orientation, t.decoration)
    return Patch(patch.tiling, patch.provenance, patch.d, patch.points, patch.lifts, tiles, patch.frame, dict(patch.meta))


def interior_tiles(patch: Patch) -> list[int]:
    """Tiles whose every edge is shared with another tile."""
    edges = patch.edges()
    out = []
    for ti, t in enumerate(patch.tiles):
        k = len(t.vertices)
        ok = True
        for i in range(k):
            a, b = t.vertices[i], t.vertices[(i + 1) % k]
            if len(edges[(a, b) if a < b else (b, a)]) != 2:
                ok = False
                break
        if ok:
            out.append(ti)
    return out


def mutation_trials(patch: Patch, trials: int, seed: int = 0) -> list[int]:
    """Violation counts after reflecting one random interior tile, per trial."""
    rng = random.Random(seed)
    pool = interior_tiles(patch)
    if not pool:
        raise ValueError("patch has no interior tiles")
    return [len(check_legality(reflect_tile(patch, rng.choice(pool))).violations) for _ in range(trials)]


# ---------------------------------------------------------------------------
# template search
# ---------------------------------------------------------------------------


def candidate_templates() -> Iterable[ArrowTemplate]:
    """Templates giving each rhomb two single and two double arrows."""
    per_type = []
    for kinds in ((SINGLE, DOUBLE), (DOUBLE, SINGLE)):
        for apex in itertools.product((True, False), repeat=2):
            per_type.append(tuple(zip(kinds, apex)))
    for thick, thin in itertools.product(per_type, repeat=2):
        yield make_template({"thick": thick, "thin": thin})


def search_templates(steps: int = 4, seed: str = "sun") -> list[ArrowTemplate]:
    """Templates under which the inflated seed is a legal decorated patch."""
    from .inflation import pair_halves, penrose_rule, seed_patch, substitute

    rule = penrose_rule()
    halves = substitute(rule, seed_patch(rule, seed), steps)
    good = []
    for tpl in candidate_templates():
        if check_legality(pair_halves(halves, tpl)).legal:
            good.append(tpl)
    return good


# shipped template: the first legal one found by ``search_templates``; the
# other legal templates differ by swapping arrow kinds or reversing one kind
PENROSE_TEMPLATE = make_template(
    {"thick": ((SINGLE, True), (DOUBLE, True)), "thin": ((SINGLE, False), (DOUBLE, True))}
)


def vertex_class(lift) -> int:
    """Coset of A4 in its weight lattice (0 = lattice points), from root coordinates."""
    frac = Fraction(lift[0]) % 1
    return int(round((1 - frac) * 5)) % 5


def _missing_class(patch: Patch) -> int:
    present = {vertex_class(lf) for lf in patch.lifts}
    if 0 not in present:
        return 0
    absent = sorted(set(range(5)) - present)
    if len(absent) != 1:
        raise ValueError("cannot tell the vertex classes of this patch apart")
    return absent[0]


def decorate(patch: Patch, template: ArrowTemplate = PENROSE_TEMPLATE) -> Patch:
    """Assign arrows to undecorated Penrose rhombs from their vertex classes.

    Relative to the coset that carries no vertices, the symmetry diagonal of
    every rhomb joins classes {2, 4} or {1, 3}, and the corner of class 2 or 3
    is the first base corner of the halves. This was read off inflation
    patches, where the arrows are known.
    """
    if not patch.tiles:
        return patch.canonical()
    if any(lf is None for lf in patch.lifts):
        raise ValueError("decorate needs lattice lifts of the vertices")
    miss = _missing_class(patch)
    rel = [(vertex_class(lf) - miss) % 5 for lf in patch.lifts]
    tiles = []
    for t in patch.tiles:
        if t.type not in ("thick", "thin") or len(t.vertices) != 4:
            raise ValueError(f"not a Penrose rhomb: {t.type!r}")
        vs = t.vertices
        start = None
        for i in range(4):
            b, c = vs[i], vs[(i + 2) % 4]
            if {rel[b], rel[c]} in ({2, 4}, {1, 3}) and rel[b] in (2, 3):
                start = i
                break
        if start is None:
            raise ValueError(f"rhomb {vs} has no consistent arrow placement; input is not a Penrose patch")
        rot = vs[start:] + vs[:start]
        tiles.append(Tile(t.type, rot, t.orientation, template.rhomb_decoration(t.type)))
    out = Patch(patch.tiling, patch.provenance, patch.d, patch.points, patch.lifts, tiles, patch.frame, dict(patch.meta))
    return out.canonical()
