import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holimits.geometry import (CompactRegion, Disc, Grid, Rect, Segment, as_point,
                               build_square_domain, circle_contour, rectangle_contour,
                               sample_region)
from holimits.runge import build_S

coord = st.floats(-3, 3, allow_nan=False)


@st.composite
def regions(draw):
    rects = []
    for _ in range(draw(st.integers(0, 3))):
        x0, x1 = sorted(draw(st.tuples(coord, coord)))
        y0, y1 = sorted(draw(st.tuples(coord, coord)))
        rects.append(Rect(x0, x1, y0, y1))
    segs = []
    for _ in range(draw(st.integers(0 if rects else 1, 2))):
        lo, hi = sorted(draw(st.tuples(coord, coord)))
        segs.append(Segment(draw(st.sampled_from(["re", "im"])), draw(coord), lo, hi))
    return CompactRegion(tuple(rects), tuple(segs))


def test_square_domain_examples():
    sq = build_square_domain()
    assert sq.contains(0)
    assert sq.distance(2) == 1.0
    assert sq.contains(0.99 + 0.99j)
    assert not sq.contains(1.01)


def test_sample_segment_and_square():
    seg = CompactRegion(segments=(Segment("re", 0.0, -1.0, 1.0),))
    pts = sample_region(seg, 1.0)
    assert set(np.round(pts, 12)) >= {-1, 0, 1}
    corners = sample_region(CompactRegion(rects=(Rect(0, 1, 0, 1),)), 2.0)
    assert sorted(corners, key=lambda z: (z.real, z.imag)) == [0, 1j, 1, 1 + 1j]


def test_cross_samples_lie_on_axes():
    pts = sample_region(build_S(1), 0.01)
    assert np.all((pts.real == 0) | (pts.imag == 0))


def test_sample_rejects_bad_spacing():
    with pytest.raises(ValueError):
        sample_region(build_square_domain(), 0.0)


@settings(max_examples=60, deadline=None)
@given(regions(), st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False), min_size=1, max_size=20))
def test_contains_iff_zero_distance(region, points):
    z = np.array(points)
    d = region.distance(z)
    assert np.all((d == 0) == region.contains(z))
    assert np.all(d >= 0)


@settings(max_examples=40, deadline=None)
@given(regions(), st.floats(0.05, 2.0))
def test_samples_deterministic_and_inside(region, h):
    a = sample_region(region, h)
    b = sample_region(region, h)
    assert np.array_equal(a, b)
    assert np.all(region.contains(a))


@settings(max_examples=40, deadline=None)
@given(regions())
def test_region_json_round_trip(region):
    again = CompactRegion.from_dict(json.loads(json.dumps(region.to_dict())))
    assert again == region


def test_region_rejects_unknown_keys():
    with pytest.raises(ValueError):
        CompactRegion.from_dict({"rects": [], "discs": []})


def test_distance_between_regions():
    a = CompactRegion(rects=(Rect(0, 1, 0, 1),))
    b = CompactRegion(rects=(Rect(2, 3, 2, 3),))
    assert a.distance_to(b) == pytest.approx(math.sqrt(2))


def test_circle_contour_examples():
    c = circle_contour(0, 1, 64)
    assert abs(c.winding_number(0) - 1) < 1e-12
    assert abs(c.weights.sum()) < 1e-12
    c = circle_contour(0.5, 0.25, 128)
    v = np.sum(c.weights * c.nodes / (c.nodes - 0.5)) / (2j * np.pi)
    assert abs(v - 0.5) < 1e-10


def test_circle_contour_floor():
    with pytest.raises(ValueError):
        circle_contour(0, 1, 15)


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=2, allow_nan=False), st.floats(0.01, 5), st.integers(16, 400))
def test_contour_invariants(center, radius, n):
    c = circle_contour(center, radius, n)
    assert abs(c.weights.sum()) <= 1e-12 * max(1, radius)
    assert abs(c.winding_number(center) - 1) <= 1e-10
    assert c.length == pytest.approx(2 * math.pi * radius, rel=1e-2)


def test_rectangle_contour_winding():
    r = rectangle_contour(0.1j, 1.0, 0.5)
    assert abs(r.winding_number(0.1j) - 1) < 1e-6
    assert abs(r.winding_number(3) - 0) < 1e-6
    # corners cost accuracy: 256 nodes per edge miss the 1e-6 winding check
    with pytest.raises(ValueError):
        rectangle_contour(0, 1.0, 0.5, n_per_edge=256)


def test_grid_layout():
    g = Grid(-1, 1, 0, 2, 5, 3)
    assert g.nodes.shape == (3, 5)
    assert g.nodes.size == 15
    assert g.dx == 0.5 and g.dy == 1.0
    assert g.cell_shape == (2, 4)
    assert g.refined(2).nodes.shape == (5, 9)
    with pytest.raises(ValueError):
        Grid(0, 1, 0, 1, 1, 3)
    with pytest.raises(ValueError):
        Grid(1, 0, 0, 1, 3, 3)


def test_disc_sampling():
    d = Disc(0.2, 0.5)
    pts = d.sample(0.05)
    assert np.all(d.contains(pts))
    assert np.isclose(np.abs(pts - 0.2).max(), 0.5)


def test_point_validation():
    assert as_point(1) == 1 + 0j
    with pytest.raises(ValueError):
        as_point(complex(math.nan, 0))
