import math
from fractions import Fraction

import pytest

from quasitile.cutproject import (
    ab_spec,
    ab_tiling,
    ab_vertex_set,
    ab_window,
    cartesian_matrix,
    cutproject_points,
    decagon_centers,
    penrose_tiling,
    penrose_vertex_set,
    penrose_windows,
    triangle_tiling,
    triangle_vertex_set,
)
from quasitile.exactnum import SQRT2, TAU, sign, to_float
from quasitile.lattice import ab_scheme, penrose_scheme
from quasitile.matching import vertex_class

SQRT2_F = math.sqrt(2)
TAU_F = (1 + math.sqrt(5)) / 2


def edge_lengths2(patch):
    cart = cartesian_matrix(patch)
    xy = patch.float_points(cart)
    out = set()
    for (a, b) in patch.edges():
        out.add(round(float(((xy[a] - xy[b]) ** 2).sum()), 9))
    return out


# --- Ammann-Beenker window ----------------------------------------------------------


def test_window_is_unit_octagon():
    w = ab_window()
    assert len(w.vertices) == 8
    assert w.measure() == 2 * (1 + SQRT2)


@pytest.mark.parametrize(
    "z, accepted",
    [((0, 0, 0, 0), True), ((1, 0, 0, 0), True), ((2, 0, 0, 0), False), ((1, 1, 0, 0), True), ((1, 0, 1, 0), False)],
)
def test_window_membership(z, accepted):
    s = ab_scheme()
    assert ab_window().contains(s.perp(z), "closed") is accepted


def test_unit_vector_is_inside_the_inradius():
    # |a1*| = 1 against the inradius (1 + sqrt 2)/2 of the unit-edge octagon
    assert sign((1 + SQRT2) / 2 - 1) > 0


def test_vertex_set_lies_in_window_and_disk():
    spec = ab_spec()
    _, win = spec.windows["0"]
    s = spec.scheme
    patch = ab_vertex_set(6)
    for p, lift in zip(patch.points, patch.lifts):
        assert win.contains(s.perp(lift))
        assert sign(36 - s.par_frame.norm2(p)) >= 0


def test_vertex_density_matches_window_over_covolume():
    from quasitile.diffraction import predicted_density

    r = 30
    n = len(ab_vertex_set(r).points)
    assert n / (math.pi * r * r) == pytest.approx(predicted_density(ab_spec()), rel=0.02)


def test_ab_density_exact_value():
    # window area 2 + 2 sqrt 2 over covolume 1 of Z^4 in (par, perp) coordinates
    from quasitile.diffraction import predicted_density

    assert predicted_density(ab_spec()) == pytest.approx((2 + 2 * SQRT2_F) / 4)


def test_origin_accepted_with_and_without_offset():
    assert ab_vertex_set(1, (0, 0)).meta["classes"]["0"] > 0
    assert (Fraction(0),) * 4 in ab_vertex_set(2).lifts


# --- Ammann-Beenker tiling ------------------------------------------------------------


def test_ab_tiling_edges_have_unit_length():
    patch = ab_tiling(3)
    assert edge_lengths2(patch) == {1.0}
    s = ab_scheme()
    for (a, b) in patch.edges():
        d = tuple(x - y for x, y in zip(patch.points[a], patch.points[b]))
        assert s.par_frame.norm2(d) == 1


def test_ab_tile_inventory():
    patch = ab_tiling(8)
    assert set(patch.type_counts()) == {"square", "rhomb"}
    areas = {t.type: patch.tile_area(t) for t in patch.tiles}
    assert abs(areas["square"]) == 1
    assert abs(areas["rhomb"]) == SQRT2 / 2


def test_ab_tiles_are_face_to_face():
    from quasitile.dualcell import interior_edge_check

    assert interior_edge_check(ab_tiling(8)) == []


@pytest.mark.slow
def test_ab_rhomb_square_ratio_radius_50():
    counts = ab_tiling(50).type_counts()
    assert counts["rhomb"] / counts["square"] == pytest.approx(SQRT2_F, rel=0.01)


# --- Penrose -----------------------------------------------------------------------


def test_penrose_windows_have_five_classes():
    spec = penrose_windows()
    assert sorted(spec.windows) == ["0", "1", "2", "3", "4"]
    # classes 1 and 4 are small pentagons, 2 and 3 large ones (ratio tau^2 in area)
    areas = {k: w.polygon.measure() for k, (_, w) in spec.windows.items()}
    assert areas["2"] == areas["3"] == TAU**2 * areas["1"]
    assert areas["1"] == areas["4"]


def test_penrose_vertex_classes():
    patch = penrose_vertex_set(8)
    classes = {vertex_class(lf) for lf in patch.lifts}
    assert classes == {1, 2, 3, 4}


def test_empty_window_class():
    assert penrose_vertex_set(5, classes=()).points == []
    with pytest.raises(KeyError):
        cutproject_points(penrose_windows(), 3, ["7"])


def test_penrose_tile_inventory(penrose_r10):
    assert set(penrose_r10.type_counts()) == {"thick", "thin"}
    assert edge_lengths2(penrose_r10) == {1.0}


@pytest.mark.slow
def test_penrose_thick_thin_ratio_radius_50():
    counts = penrose_tiling(50).type_counts()
    assert counts["thick"] / counts["thin"] == pytest.approx(TAU_F, rel=0.01)


def test_decagon_centers_are_lattice_points():
    patch = decagon_centers(10)
    assert patch.points
    assert all(vertex_class(lf) == 0 for lf in patch.lifts)
    assert all(x.denominator == 1 for lf in patch.lifts for x in lf)


# --- Tuebingen triangles -----------------------------------------------------------


def test_triangle_vertex_set_contains_origin():
    patch = triangle_vertex_set(4)
    assert (0, 0, 0, 0) in [tuple(lf) for lf in patch.lifts]


def test_triangle_tiling_two_shapes_with_edge_ratio_tau():
    patch = triangle_tiling(6)
    assert set(patch.type_counts()) == {"large", "small"}
    norm2 = penrose_scheme().par_frame.norm2
    for t in patch.tiles[:40]:
        pts = patch.tile_points(t)
        sides = sorted(
            (norm2(tuple(a - b for a, b in zip(pts[i], pts[(i + 1) % 3]))) for i in range(3)), key=to_float
        )
        # isosceles triangles: sides (1, tau, tau) or (1, 1, tau) up to scale
        ratio = sides[2] / sides[0]
        assert ratio == TAU**2
        assert sides[1] in (sides[0], sides[2])


def test_triangle_vertices_match_vertex_set():
    tiling = triangle_tiling(6)
    verts = triangle_vertex_set(4).point_set()
    assert verts <= tiling.point_set()


def test_window_json_roundtrip():
    spec = penrose_windows()
    again = spec.with_overrides(spec.to_json())
    assert again.to_json() == spec.to_json()
    with pytest.raises(ValueError):
        spec.with_overrides('{"schema": "other"}')


def test_offset_moves_the_vertex_set():
    a = ab_vertex_set(5).point_set()
    b = ab_vertex_set(5, (Fraction(1, 5), Fraction(1, 7))).point_set()
    assert a != b
    assert abs(len(a) - len(b)) < 0.2 * len(a)
