import pytest

from quasitile.cutproject import penrose_tiling
from quasitile.inflation import pair_halves, penrose_rule, seed_patch, substitute
from quasitile.matching import (
    DOUBLE,
    PENROSE_TEMPLATE,
    SINGLE,
    EdgeDecoration,
    candidate_templates,
    check_legality,
    decorate,
    interior_tiles,
    mutation_trials,
    reflect_tile,
    search_templates,
    vertex_class,
)
from quasitile.patch import Patch


def strip(patch):
    from quasitile.patch import Tile

    tiles = [Tile(t.type, t.vertices, t.orientation, None) for t in patch.tiles]
    return Patch(patch.tiling, patch.provenance, patch.d, patch.points, patch.lifts, tiles, patch.frame, {})


def test_edge_decoration_validation():
    with pytest.raises(ValueError):
        EdgeDecoration(3, 1)
    assert EdgeDecoration(SINGLE, 1).canonical(5, 2) == (SINGLE, -1)


def test_template_gives_two_kinds_per_rhomb():
    for typ in ("thick", "thin"):
        dec = PENROSE_TEMPLATE.rhomb_decoration(typ)
        assert sorted(k for k, _ in dec) == [SINGLE, SINGLE, DOUBLE, DOUBLE]


def test_single_tile_is_legal():
    rule = penrose_rule()
    one = pair_halves(seed_patch(rule, "star"), PENROSE_TEMPLATE)
    single = Patch(one.tiling, one.provenance, one.d, one.points, one.lifts, one.tiles[:1], one.frame, {})
    rep = check_legality(single)
    assert rep.legal and rep.interior_edges == 0


def test_undecorated_patch_rejected(penrose_r10):
    with pytest.raises(ValueError):
        check_legality(penrose_r10)


def test_inflation_patch_is_legal():
    rule = penrose_rule()
    patch = pair_halves(substitute(rule, seed_patch(rule, "sun"), 3), PENROSE_TEMPLATE)
    rep = check_legality(patch)
    assert rep.legal and rep.interior_edges > 50


def test_one_reflection_is_detected(penrose_legal):
    ti = interior_tiles(penrose_legal)[7]
    rep = check_legality(reflect_tile(penrose_legal, ti))
    assert not rep.legal
    assert all(ti in v.tiles for v in rep.violations if v.tiles)


def test_reflection_keeps_the_covered_region(penrose_legal):
    ti = interior_tiles(penrose_legal)[0]
    before = set(penrose_legal.tiles[ti].vertices)
    after = set(reflect_tile(penrose_legal, ti).tiles[ti].vertices)
    assert before == after


def test_mutation_trials_all_detected(penrose_legal):
    counts = mutation_trials(penrose_legal, 30, seed=3)
    assert len(counts) == 30 and min(counts) >= 1


def test_template_search_recovers_shipped_template():
    found = search_templates(steps=3)
    assert PENROSE_TEMPLATE in found
    assert 0 < len(found) < len(list(candidate_templates()))


def test_decorate_empty():
    empty = Patch.empty("penrose", "cutproject", 5, "a4-par")
    assert decorate(empty).tiles == []


def test_decorate_cutproject_patch_is_legal(penrose_r10):
    rep = check_legality(decorate(penrose_r10))
    assert rep.legal


def test_decorate_reproduces_inflation_arrows():
    rule = penrose_rule()
    patch = pair_halves(substitute(rule, seed_patch(rule, "sun"), 4), PENROSE_TEMPLATE).canonical()
    again = decorate(strip(patch))
    assert [(t.vertices, t.decoration) for t in again.tiles] == [(t.vertices, t.decoration) for t in patch.tiles]


def test_decorated_rhombs_follow_the_template(penrose_r10):
    out = decorate(penrose_r10)
    for t in out.tiles:
        assert t.decoration == PENROSE_TEMPLATE.rhomb_decoration(t.type)
    # a lone thick rhomb gets the same arrows as inside the patch
    k = next(i for i, t in enumerate(penrose_r10.tiles) if t.type == "thick")
    lone = Patch(out.tiling, "cutproject", 5, penrose_r10.points, penrose_r10.lifts, [penrose_r10.tiles[k]], out.frame, {})
    t = decorate(lone).tiles[0]
    assert t.decoration == PENROSE_TEMPLATE.rhomb_decoration("thick")
    assert (t.vertices, t.decoration) in [(u.vertices, u.decoration) for u in out.tiles]


def test_decorate_rejects_non_rhombs():
    from quasitile.cutproject import triangle_tiling

    with pytest.raises(ValueError):
        decorate(triangle_tiling(3))


def test_vertex_class_values():
    from fractions import Fraction

    assert vertex_class((0, 0, 0, 0)) == 0
    assert vertex_class((Fraction(4, 5), Fraction(3, 5), Fraction(2, 5), Fraction(1, 5))) == 1
    assert vertex_class((Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5))) == 4


def test_cutproject_patch_decorations_at_larger_radius():
    assert check_legality(decorate(penrose_tiling(14))).legal
