import math

import pytest

from quasitile.covering import (
    CoveringCluster,
    center_classes,
    cluster_templates,
    decagon_cluster,
    find_cluster_centers,
    find_covering,
    pentagon_clusters,
    regular_cluster,
    rotate36,
    verify_covering,
)
from quasitile.cutproject import decagon_centers, penrose_tiling, triangle_tiling
from quasitile.exactnum import TAU, QuadValue
from quasitile.patch import Patch

TAU_F = (1 + math.sqrt(5)) / 2


@pytest.fixture(scope="module")
def decagons(penrose_r10):
    return find_cluster_centers(penrose_r10, decagon_cluster())


def test_rotation_by_36_has_order_ten():
    v = (QuadValue(1, 0, 5), QuadValue(0, 0, 5))
    assert rotate36(v, 10) == v
    assert rotate36(v, 5) == (-v[0], -v[1])
    assert rotate36(v, 2) == (QuadValue(0, 0, 5), QuadValue(1, 0, 5))


def test_decagon_geometry():
    dec = decagon_cluster()
    assert len(dec.corners[0]) == 10
    assert dec.circumradius == pytest.approx(TAU_F)
    # edge of a regular decagon with circumradius tau is 1
    assert 2 * TAU_F * math.sin(math.pi / 10) == pytest.approx(1.0)


def test_pentagon_areas_scale_by_tau_squared():
    small, large = pentagon_clusters()
    assert large.area == TAU**2 * small.area
    assert len(small.corners) == 2 and len(large.corners) == 2


def test_regular_cluster_json():
    c = regular_cluster("test", 5, 1, [0])
    assert isinstance(c, CoveringCluster)
    d = c.to_dict()
    assert d["name"] == "test" and len(d["corners"][0]) == 5


def test_empty_patch():
    empty = Patch.empty("penrose", "cutproject", 5, "a4-par")
    assert find_cluster_centers(empty, decagon_cluster()) == []


def test_every_decagon_holds_ten_rhombs(decagons):
    assert decagons
    assert all(len(p.tiles) == 10 for p in decagons)


def test_most_decagons_sit_on_lattice_points(penrose_r10, decagons):
    classes = center_classes(decagons)
    assert classes[0] > sum(v for k, v in classes.items() if k != 0)
    lattice_centres = decagon_centers(12).point_set()
    for p in decagons:
        if p.center_lift is not None and all(x.denominator == 1 for x in p.center_lift):
            assert p.center in lattice_centres


def test_single_placement_covers_its_tiles(penrose_r10, decagons):
    one = decagons[:1]
    rep = verify_covering(penrose_r10, one, margin=0.0)
    covered = set(one[0].tiles)
    assert rep.covered == len(covered)
    assert set(rep.uncovered) == set(range(len(penrose_r10.tiles))) - covered


def test_decagon_covering_radius_15():
    patch = penrose_tiling(15)
    placements = find_covering(patch, [decagon_cluster()])
    rep = verify_covering(patch, placements)
    assert rep.interior_tiles > 100
    assert rep.complete and rep.fraction == 1.0


def test_pentagon_covering_radius_15():
    patch = triangle_tiling(15)
    placements = find_covering(patch, pentagon_clusters())
    sizes = {"pentagon-small": 3, "pentagon-large": 7}
    assert all(len(p.tiles) == sizes[p.cluster] for p in placements)
    rep = verify_covering(patch, placements)
    assert rep.interior_tiles > 100
    assert rep.complete


def test_decagon_fillings_are_few(penrose_r10, decagons):
    # every decagon is filled in one of a handful of ways (up to rotation)
    assert len(cluster_templates(penrose_r10, decagons)) <= 20
