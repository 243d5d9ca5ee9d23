import itertools
from fractions import Fraction

import numpy as np
import pytest

from quasitile.cutproject import ab_scheme
from quasitile.dualcell import (
    SingularOffsetError,
    compatible_function_eval,
    covered_measure,
    delone_cells,
    dual_boundary,
    duality_report,
    generic_offset,
    hole_classes,
    interior_edge_check,
    product_tiles,
    relevant_vectors,
    section_tiling,
    voronoi_complex,
    voronoi_domain,
    volume_partition,
)
from quasitile.exactnum import TAU, to_float
from quasitile.inflation import fibonacci_word
from quasitile.lattice import an_lattice, fibonacci_scheme, penrose_scheme, zn_lattice

half = Fraction(1, 2)


# --- Voronoi domains -------------------------------------------------------------------


def test_square_voronoi_cell():
    dom = voronoi_domain(zn_lattice(2))
    assert sorted(dom.vertices) == sorted(itertools.product((-half, half), repeat=2))


def test_a2_voronoi_cell_is_hexagon():
    lat = an_lattice(2)
    dom = voronoi_domain(lat)
    assert len(dom.vertices) == 6
    # all vertices at the same distance: the hexagon is regular
    assert len({lat.inner(v, v) for v in dom.vertices}) == 1


def test_a4_relevant_vectors_are_the_roots():
    # oracle: roots e_i - e_j of A4 in the sum-zero hyperplane of Z^5
    roots = [
        v
        for v in itertools.product(range(-1, 2), repeat=5)
        if sum(v) == 0 and sum(x * x for x in v) == 2
    ]
    assert len(roots) == 20
    lat = an_lattice(4)
    rel = relevant_vectors(lat)
    assert sorted(tuple(lat.ambient(r)) for r in rel) == sorted(roots)
    assert len(voronoi_domain(lat).vertices) == 30


def test_voronoi_domain_translates():
    lat = zn_lattice(2)
    dom = voronoi_domain(lat, (2, -1))
    assert dom.contains((2, -1)) and not dom.contains((0, 0))
    assert dom.contains((Fraction(5, 2), Fraction(-1, 2)))


def test_voronoi_domain_rejects_bad_center():
    with pytest.raises(ValueError):
        voronoi_domain(zn_lattice(2), (0, 0, 0))


# --- Delone cells and duality -----------------------------------------------------------


def test_square_delone_cells():
    cells = delone_cells(zn_lattice(2))
    assert {c.hole_class for c in cells} == {(half, half)}
    assert all(len(c.vertices) == 4 for c in cells)


def test_a2_two_triangle_classes():
    cells = delone_cells(an_lattice(2))
    assert all(len(c.vertices) == 3 for c in cells)
    assert len(hole_classes(an_lattice(2))) == 2


def test_a4_hole_classes():
    # four nontrivial cosets of A4 in its weight lattice; simplices and
    # octahedron-like cells with 5 and 10 vertices
    cells = delone_cells(an_lattice(4))
    assert len(hole_classes(an_lattice(4))) == 4
    assert sorted({len(c.vertices) for c in cells}) == [5, 10]


def test_square_edge_dual():
    cx = voronoi_complex(zn_lattice(2))
    for edge in cx.faces[1]:
        dual = dual_boundary(edge)
        assert dual.dim == 1 and len(dual.vertices) == 2


def test_a2_vertex_dual_is_triangle():
    cx = voronoi_complex(an_lattice(2))
    for v in cx.faces[0]:
        assert dual_boundary(v).dim == 2 and len(dual_boundary(v).vertices) == 3


@pytest.mark.parametrize("lattice", [zn_lattice(2), an_lattice(2), an_lattice(4)], ids=["Z2", "A2", "A4"])
def test_dimension_duality(lattice):
    rep = duality_report(lattice)
    assert rep["passed"] and not rep["violations"]


def test_a4_face_counts():
    # 30 vertices, 20 facets; Euler characteristic of the boundary 3-sphere is 0
    counts = duality_report(an_lattice(4))["faces_by_dim"]
    assert counts["0"] == 30 and counts["3"] == 20
    assert counts["0"] - counts["1"] + counts["2"] - counts["3"] == 0


# --- product tiles ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "factory, kind",
    [(fibonacci_scheme, "T"), (fibonacci_scheme, "T*"), (penrose_scheme, "T"), (penrose_scheme, "T*"), (ab_scheme, "T*")],
)
def test_product_tiles_partition_a_fundamental_domain(factory, kind):
    total, covolume = volume_partition(factory(), kind)
    assert total == covolume


def test_fibonacci_two_squares():
    tiles = product_tiles(fibonacci_scheme(), "T*")
    assert len(tiles) == 2
    assert {t.shape for t in tiles} == {0, 1}
    lengths = sorted((t.parallel_factor.measure() for t in tiles), key=to_float)
    assert lengths[1] == TAU * lengths[0]


def test_penrose_rhombs_and_triangles():
    for kind, count in (("T", 20), ("T*", 20)):
        tiles = product_tiles(penrose_scheme(), kind)
        assert len(tiles) == count
        assert len({t.shape for t in tiles}) == 2
    assert all(len(t.par_vertices) == 4 for t in product_tiles(penrose_scheme(), "T"))
    assert all(len(t.par_vertices) == 3 for t in product_tiles(penrose_scheme(), "T*"))


def test_product_tiles_bad_kind():
    with pytest.raises(ValueError):
        product_tiles(fibonacci_scheme(), "X")


# --- sections -----------------------------------------------------------------------


def test_fibonacci_section_length_100():
    s = fibonacci_scheme()
    patch = section_tiling(s, "T", None, ((0,), (100,)), names=["A", "B"])
    lengths = {}
    for t in patch.tiles:
        a, b = (patch.points[v][0] for v in t.vertices)
        lengths.setdefault(t.type, set()).add(abs(b - a))
    assert {k: len(v) for k, v in lengths.items()} == {"A": 1, "B": 1}
    assert lengths["A"].pop() == TAU * lengths["B"].pop()
    assert "BB" not in fibonacci_word(patch)


def test_empty_region():
    patch = section_tiling(fibonacci_scheme(), "T", None, ((0,), (0,)))
    assert patch.tiles == [] and patch.points == []


@pytest.mark.parametrize("factory, kind", [(penrose_scheme, "T"), (penrose_scheme, "T*"), (ab_scheme, "T*")])
def test_section_covers_box_face_to_face(factory, kind):
    region = ((-3, -3), (3, 3))
    patch = section_tiling(factory(), kind, None, region)
    covered, box = covered_measure(patch, region)
    assert covered == box
    assert interior_edge_check(patch) == []


def test_singular_offset_reported():
    s = fibonacci_scheme()
    with pytest.raises(SingularOffsetError) as info:
        section_tiling(s, "T", (0,), ((0,), (20,)))
    assert info.value.suggestion is not None


def test_generic_offset_is_rational_and_small():
    off = generic_offset(penrose_scheme())
    assert len(off) == 2
    assert all(x.b == 0 and 0 < to_float(x) < 0.1 for x in off)


# --- compatible functions ------------------------------------------------------------


def test_constant_profiles():
    s = fibonacci_scheme()
    vals = {t.index: (lambda y: 7.0) for t in product_tiles(s, "T")}
    for x in (Fraction(1, 3), Fraction(17, 2), 40):
        assert compatible_function_eval(s, "T", vals, (x,)) == 7.0


def test_indicator_profile_reads_the_word():
    s = fibonacci_scheme()
    tiles = product_tiles(s, "T")
    names = ["A", "B"]
    vals = {t.index: (lambda y, k=t.shape: float(k)) for t in tiles}
    patch = section_tiling(s, "T", None, ((0,), (30,)), names=names)
    for tile in patch.tiles[1:-1]:
        a, b = (patch.points[v][0] for v in tile.vertices)
        mid = (a + b) * Fraction(1, 2)
        got = compatible_function_eval(s, "T", vals, (mid,))
        assert names[int(got)] == tile.type


def test_equal_points_in_congruent_tiles_agree():
    s = fibonacci_scheme()
    vals = {t.index: (lambda y: float(np.sin(3 * y[0]) + 2)) for t in product_tiles(s, "T")}
    patch = section_tiling(s, "T", None, ((0,), (30,)), names=["A", "B"])
    seen = {}
    for tile in patch.tiles[1:-1]:
        a, b = sorted((patch.points[v][0] for v in tile.vertices), key=to_float)
        x = a + (b - a) * Fraction(1, 3)
        val = compatible_function_eval(s, "T", vals, (x,))
        key = (tile.type, b - a)
        if key in seen:
            assert val == pytest.approx(seen[key])
        seen[key] = val
