import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from quasitile.cutproject import ab_spec
from quasitile.exactnum import SQRT2, TAU, QuadValue, to_float
from quasitile.inflation import (
    RULES,
    SubstitutionRule,
    face_to_face_defects,
    fibonacci_rule,
    fibonacci_word,
    merge_triangles,
    pair_halves,
    repetitivity_check,
    seed_names,
    seed_patch,
    square_lattice_patch,
    substitute,
    substitute_counts,
    substitution_matrix,
    tile_frequencies,
    word_substitution,
)
from quasitile.patch import Patch, Tile

mpmath.mp.dps = 40


def total_area(patch):
    return sum((abs(patch.tile_area(t)) for t in patch.tiles), QuadValue(0, 0, patch.d))


def perron_oracle(matrix):
    """Dominant eigenpair by high-precision power iteration (independent of the exact code)."""
    m = mpmath.matrix(matrix)
    v = mpmath.matrix([1] * len(matrix))
    lam = mpmath.mpf(0)
    for _ in range(200):
        w = m * v
        lam = mpmath.norm(w) / mpmath.norm(v)
        v = w / mpmath.norm(w)
    return lam, [v[i] / sum(v) for i in range(len(matrix))]


# --- rules ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(RULES))
def test_rules_are_valid_dissections(name):
    assert RULES[name]().check() == []


def test_ab_area_factor():
    rule = RULES["ab"]()
    assert rule.factor**2 == QuadValue(3, 2, 2)
    for lhs, rhs in rule.area_report().values():
        assert lhs == rhs


@pytest.mark.parametrize(
    "name, types, matrix, perron",
    [
        ("fibonacci", ["A", "B"], [[1, 1], [1, 0]], TAU),
        ("ab", ["triangle", "rhomb"], [[3, 4], [2, 3]], QuadValue(3, 2, 2)),
        ("penrose", ["thick", "thin"], [[2, 1], [1, 1]], TAU**2),
    ],
)
def test_substitution_matrices(name, types, matrix, perron):
    m = substitution_matrix(RULES[name]())
    assert m.types == types
    assert m.matrix == matrix
    assert m.perron_value() == perron
    assert m.is_primitive()
    lam, _ = perron_oracle(matrix)
    assert to_float(perron) == pytest.approx(float(lam), rel=1e-14)


@pytest.mark.parametrize(
    "name, ratio",
    [("fibonacci", TAU), ("ab", SQRT2), ("penrose", TAU)],
)
def test_frequencies_match_eigenvector(name, ratio):
    rule = RULES[name]()
    freqs = tile_frequencies(rule)
    a, b = (freqs[t] for t in rule.types)
    assert a + b == 1
    assert a / b == ratio
    _, vec = perron_oracle(substitution_matrix(rule).matrix)
    assert to_float(a) == pytest.approx(float(vec[0]), rel=1e-12)


def test_fibonacci_frequencies_exact():
    freqs = tile_frequencies(fibonacci_rule())
    assert freqs["A"] == 1 / TAU and freqs["B"] == 1 / TAU**2


def test_characteristic_polynomial():
    assert substitution_matrix(fibonacci_rule()).char_poly() == [1, -1, -1]
    assert substitution_matrix(RULES["ab"]()).char_poly() == [1, -6, 1]


def test_rule_json_roundtrip():
    for name in RULES:
        rule = RULES[name]()
        again = SubstitutionRule.from_json(rule.to_json())
        assert again.to_json() == rule.to_json()
        assert again.check() == []


# --- substitute ------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(RULES))
def test_zero_steps_is_identity(name):
    rule = RULES[name]()
    for seed in seed_names(rule):
        p = seed_patch(rule, seed)
        q = substitute(rule, p, 0)
        assert q.point_set() == p.point_set()
        assert sorted((t.type, t.vertices) for t in q.tiles) == sorted((t.type, t.vertices) for t in p.canonical().tiles)


def test_negative_steps_rejected():
    rule = fibonacci_rule()
    with pytest.raises(ValueError):
        substitute(rule, seed_patch(rule, "tile:A"), -1)


def test_fibonacci_word_after_five_steps():
    rule = fibonacci_rule()
    word = fibonacci_word(substitute(rule, seed_patch(rule, "tile:A"), 5))
    assert word == word_substitution("A", 5)
    assert word.startswith("ABAABABA") and len(word) == 13


def test_one_ab_step_counts():
    rule = RULES["ab"]()
    assert substitute(rule, seed_patch(rule, "tile:triangle"), 1).type_counts() == {"triangle": 3, "rhomb": 2}
    assert substitute(rule, seed_patch(rule, "tile:rhomb"), 1).type_counts() == {"triangle": 4, "rhomb": 3}


@given(st.sampled_from(["ab", "penrose", "fibonacci"]), st.integers(0, 3), st.data())
def test_counts_and_area_follow_the_matrix(name, steps, data):
    rule = RULES[name]()
    seed = data.draw(st.sampled_from(seed_names(rule)))
    p = seed_patch(rule, seed)
    q = substitute(rule, p, steps)
    assert q.type_counts() == {k: v for k, v in substitute_counts(rule, p.type_counts(), steps).items() if v}
    dim = 1 if name == "fibonacci" else 2
    assert total_area(q) == rule.factor ** (dim * steps) * total_area(p)


def test_mirrored_triangle_gives_mirrored_children():
    rule = RULES["ab"]()
    proto = rule.prototiles["triangle"]
    swap = lambda p: (p[1], p[0])
    direct = Patch.empty("ab", "seed", 2, "ab-par")
    mirror = Patch.empty("ab", "seed", 2, "ab-par")
    for patch, pts, o in ((direct, proto, 1), (mirror, tuple(swap(p) for p in proto), -1)):
        s = rule.projection
        for p in pts:
            patch.points.append(p)
            patch.lifts.append(s.lift(p, integral=False))
        patch.tiles.append(Tile("triangle", (0, 1, 2), o))
    a = substitute(rule, direct, 1)
    b = substitute(rule, mirror, 1)
    key_a = sorted((t.type, tuple(swap(a.points[v]) for v in t.vertices), -t.orientation) for t in a.tiles)
    key_b = sorted((t.type, tuple(b.points[v] for v in t.vertices), t.orientation) for t in b.tiles)
    assert key_a == key_b


@pytest.mark.parametrize("name, seeds", [("ab", ["square", "octagon", "tile:rhomb"]), ("penrose", ["sun", "star"])])
def test_inflation_is_face_to_face(name, seeds):
    rule = RULES[name]()
    for seed in seeds:
        assert face_to_face_defects(substitute(rule, seed_patch(rule, seed), 3)) == []


def test_octagon_seed_vertices_lie_in_the_window():
    # the marked patch grown from the octagon is a piece of the cut-and-project
    # tiling with zero offset: its vertices are accepted by the closed window
    rule = RULES["ab"]()
    patch = substitute(rule, seed_patch(rule, "octagon"), 3)
    _, win = ab_spec((0, 0)).windows["0"]
    s = rule.projection
    for lf in patch.lifts:
        assert win.polygon.contains(s.perp(lf), "closed")


def test_merged_triangles_give_squares():
    rule = RULES["ab"]()
    patch = merge_triangles(substitute(rule, seed_patch(rule, "square"), 2))
    counts = patch.type_counts()
    assert set(counts) <= {"triangle", "square", "rhomb"}
    assert counts["square"] > 0


def test_penrose_pairing():
    rule = RULES["penrose"]()
    halves = substitute(rule, seed_patch(rule, "sun"), 3)
    rhombs = pair_halves(halves)
    assert all(len(t.vertices) == 4 for t in rhombs.tiles)
    assert 2 * len(rhombs.tiles) <= len(halves.tiles)
    assert face_to_face_defects(rhombs) == []


def test_unknown_seed():
    with pytest.raises(ValueError):
        seed_patch(RULES["ab"](), "sun")


# --- repetitivity ------------------------------------------------------------------------


def test_periodic_control_has_unit_gap():
    rep = repetitivity_check(square_lattice_patch(40), probe_radius=1.0)
    assert rep.ok and rep.max_gap == pytest.approx(1.0)
    assert rep.classes == 1


def test_small_patch_rejected():
    rule = RULES["ab"]()
    with pytest.raises(ValueError):
        repetitivity_check(seed_patch(rule, "square"), probe_radius=2.0)


def test_ab_vertex_stars_recur():
    rule = RULES["ab"]()
    patch = substitute(rule, seed_patch(rule, "square"), 4)
    rep = repetitivity_check(patch, probe_radius=1.0)
    assert rep.ok and not rep.singletons
    assert math.isfinite(rep.max_gap)
