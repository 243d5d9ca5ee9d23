import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasitile.cutproject import ab_spec, ab_vertex_set, penrose_windows
from quasitile.diffraction import (
    TAYLOR_THRESHOLD,
    _edge_ft,
    _series_ft,
    _window_cartesian,
    amplitudes,
    compare_with_direct,
    direct_pattern,
    orbit_spread,
    perp_bound,
    polygon_ft,
    predict_peaks,
    predicted_density,
    window_ft,
)
from quasitile.geometry import cartesian_frame
from quasitile.patch import Patch

SQRT2 = math.sqrt(2)
wavevectors = st.tuples(st.floats(-3, 3), st.floats(-3, 3))


@pytest.fixture(scope="module")
def octagon():
    return ab_spec((0, 0)).windows["0"][1]


@pytest.fixture(scope="module")
def pattern():
    return predict_peaks(ab_spec(), 1e-3, 2.0)


def square_ft(k):
    # closed form for the unit square [0, 1]^2
    def one(x):
        return np.exp(-1j * np.pi * x) * np.sinc(x)

    return one(k[0]) * one(k[1])


# --- polygon transforms -------------------------------------------------------------


def test_octagon_area(octagon):
    assert window_ft(octagon, np.zeros(2)).real == pytest.approx(2 * (1 + SQRT2), rel=1e-15)


@given(wavevectors)
def test_square_closed_form(k):
    sq = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)
    assert polygon_ft(sq, np.array(k))[0] == pytest.approx(square_ft(k), abs=1e-12)


def test_triangle_against_quadrature():
    tri = np.array([(0, 0), (2, 0), (0.5, 1.5)])
    k = np.array([0.37, -0.81])
    n = 1200
    u = (np.arange(n) + 0.5) / n
    x, y = np.meshgrid(u * 2.5 - 0.25, u * 1.5, indexing="ij")
    a, b, c = tri
    cross = lambda p, q, r: (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    pts = np.stack([x, y], axis=-1)
    inside = (
        (cross(a, b, pts.transpose(2, 0, 1)) >= 0)
        & (cross(b, c, pts.transpose(2, 0, 1)) >= 0)
        & (cross(c, a, pts.transpose(2, 0, 1)) >= 0)
    )
    cell = (2.5 / n) * (1.5 / n)
    quad = (np.exp(-2j * np.pi * (x * k[0] + y * k[1])) * inside).sum() * cell
    assert polygon_ft(tri, k)[0] == pytest.approx(quad, abs=3e-3)


@given(wavevectors)
def test_transform_bounded_by_area(octagon, k):
    assert abs(window_ft(octagon, np.array(k))) <= window_ft(octagon, np.zeros(2)).real + 1e-12


@given(wavevectors, st.integers(0, 7))
def test_octagon_transform_is_eightfold(octagon, k, j):
    c, s = math.cos(j * math.pi / 4), math.sin(j * math.pi / 4)
    rk = np.array([c * k[0] - s * k[1], s * k[0] + c * k[1]])
    assert window_ft(octagon, rk) == pytest.approx(window_ft(octagon, np.array(k)), abs=1e-11)


@pytest.mark.parametrize("scale", [0.5, 0.999, 1.0, 2.0])
def test_series_and_edge_sum_agree(octagon, scale):
    poly = _window_cartesian(octagon, cartesian_frame(2, 2))
    diam = np.sqrt(((poly[:, None] - poly[None]) ** 2).sum(axis=2)).max()
    q = np.array([[0.6, 0.8]]) * TAYLOR_THRESHOLD * scale / diam
    assert _series_ft(poly, q)[0] == pytest.approx(_edge_ft(poly, q)[0], abs=1e-13 / scale**2)


@given(st.floats(1e-12, 1e-2), st.floats(0, 2 * math.pi))
def test_small_wavevectors_are_accurate(r, angle):
    # near k = 0 the transform of the unit square is 1 - i pi (kx + ky) + O(k^2)
    sq = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)
    k = r * np.array([math.cos(angle), math.sin(angle)])
    assert polygon_ft(sq, k)[0] == pytest.approx(square_ft(k), abs=1e-15)


def test_clockwise_polygon_rejected():
    with pytest.raises(ValueError):
        polygon_ft(np.array([(0, 0), (0, 1), (1, 0)], dtype=float), np.zeros(2))


# --- predicted peaks ------------------------------------------------------------------


def test_origin_peak_normalised(pattern):
    origin = [p for p in pattern.peaks if not any(p.indices)]
    assert len(origin) == 1 and origin[0].intensity == pytest.approx(1.0)
    assert abs(amplitudes(ab_spec(), np.zeros((1, 4)))[0]) == pytest.approx(1.0)


def test_peaks_within_limits(pattern):
    for p in pattern.peaks:
        assert math.hypot(*p.k_par) <= 2.0 + 1e-9
        assert p.intensity >= 1e-3


def test_pattern_is_eightfold(pattern):
    assert orbit_spread(ab_spec(), pattern) < 1e-12
    counts = {}
    for p in pattern.peaks:
        if any(p.indices):
            key = round(p.intensity, 9)
            counts[key] = counts.get(key, 0) + 1
    assert all(v % 8 == 0 for v in counts.values())


def test_perp_bound_is_safe(pattern):
    # peaks just past the bound are below the cutoff
    kp = perp_bound(ab_spec(), 1e-3)
    assert all(math.hypot(*p.k_perp) <= kp for p in pattern.peaks)


def test_bad_arguments():
    with pytest.raises(ValueError):
        predict_peaks(ab_spec(), 0.0)
    with pytest.raises(ValueError):
        predict_peaks(ab_spec(), 0.1, -1)


def test_pattern_json_is_stable(pattern):
    again = predict_peaks(ab_spec(), 1e-3, 2.0)
    assert pattern.to_json() == again.to_json()
    data = json.loads(pattern.to_json())
    assert data["schema"] == "quasitile.diffraction/1" and len(data["peaks"]) == len(pattern.peaks)


def test_density():
    assert predicted_density(ab_spec()) == pytest.approx((1 + SQRT2) / 2)


def test_penrose_pattern_is_tenfold():
    spec = penrose_windows()
    spec = type(spec)(spec.scheme, {k: v for k, v in spec.windows.items() if k != "0"})
    pat = predict_peaks(spec, 1e-2, 1.5)
    assert orbit_spread(spec, pat) < 1e-10
    strong = pat.strongest(10)
    assert len({round(p.intensity, 9) for p in strong}) <= 2


# --- direct sums ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def vertices():
    return ab_vertex_set(30)


def test_direct_sum_at_origin(vertices):
    assert direct_pattern(vertices, [(0.0, 0.0)])[0] == pytest.approx(1.0)


def test_direct_sum_off_module_is_small(vertices):
    n = len(vertices.points)
    val = direct_pattern(vertices, [(0.3183, 0.1772)])[0]
    assert val < 20 / n


def test_direct_sum_agrees_with_prediction(pattern, vertices):
    rows = compare_with_direct(pattern, vertices, count=3)
    assert max(r["relative_error"] for r in rows) < 0.05


def test_direct_sum_empty_patch():
    with pytest.raises(ValueError):
        direct_pattern(Patch.empty("ab", "cutproject", 2, "ab-par"), [(0, 0)])
