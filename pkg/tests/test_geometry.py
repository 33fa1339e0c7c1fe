"""Fixed-point polygon set: round trips, booleans, validation."""

import math

import pytest
import shapely.geometry as sg
from hypothesis import given, settings
from hypothesis import strategies as st

from beadpath.errors import InvalidPolygon
from beadpath.geometry import PolygonSet, boolean, morphological_close

from conftest import rect_ring


def test_mm_round_trip_quantizes_to_um():
    ring = [(0.0001, 0.0004), (10.0006, 0.0), (10.0, 5.0), (0.0, 5.0)]
    ps = PolygonSet.from_mm([ring])
    back = ps.rings_mm()[0]
    for (x, y), (ex, ey) in zip(back, [(0.0, 0.0), (10.001, 0.0),
                                       (10.0, 5.0), (0.0, 5.0)]):
        assert abs(x - ex) < 1e-9
        assert abs(y - ey) < 1e-9


def test_rectangle_area():
    ps = PolygonSet.from_mm([rect_ring(10.0, 5.0)])
    assert abs(ps.area - 50.0) < 1e-9


def test_empty_set():
    assert PolygonSet.from_mm([]).is_empty()
    assert PolygonSet.from_mm([]).area == 0.0


def test_boolean_union_disjoint():
    a = PolygonSet.from_mm([rect_ring(1.0, 1.0)])
    b = PolygonSet.from_mm([rect_ring(1.0, 1.0, x0=5.0)])
    u = boolean(a, b, "union")
    assert abs(u.area - 2.0) < 1e-9


def test_boolean_intersection_difference():
    a = PolygonSet.from_mm([rect_ring(2.0, 2.0)])
    b = PolygonSet.from_mm([rect_ring(2.0, 2.0, x0=1.0)])
    assert abs(boolean(a, b, "intersection").area - 2.0) < 1e-9
    assert abs(boolean(a, b, "difference").area - 2.0) < 1e-9


def test_hole_winding_and_area():
    outer = rect_ring(4.0, 4.0)
    hole = rect_ring(2.0, 2.0, x0=1.0, y0=1.0)[::-1]
    ps = PolygonSet.from_mm([outer, hole])
    assert abs(ps.area - 12.0) < 1e-9


def test_self_intersecting_ring_rejected():
    bowtie = [(0.0, 0.0), (2.0, 2.0), (2.0, 0.0), (0.0, 2.0)]
    with pytest.raises(InvalidPolygon):
        PolygonSet.from_mm([bowtie]).validate()


def test_morphological_close_seals_sliver():
    # two rectangles separated by a 4 um slit: closing at 5 um fuses them
    a = rect_ring(1.0, 1.0)
    b = rect_ring(1.0, 1.0, x0=1.004)
    ps = PolygonSet.from_mm([a, b])
    closed = morphological_close(ps, 0.005)
    assert len(closed.rings_mm()) == 1


@settings(max_examples=30, deadline=None)
@given(st.floats(0.5, 5.0), st.floats(0.5, 5.0), st.floats(-2.0, 2.0),
       st.floats(-2.0, 2.0))
def test_boolean_inclusion_exclusion(w, h, dx, dy):
    a = PolygonSet.from_mm([rect_ring(w, h)])
    b = PolygonSet.from_mm([rect_ring(h, w, x0=dx, y0=dy)])
    union = boolean(a, b, "union").area
    inter = boolean(a, b, "intersection").area
    assert abs((a.area + b.area) - (union + inter)) < 1e-5


def test_boolean_matches_shapely_oracle():
    ring_a = [(0.0, 0.0), (3.0, 0.0), (3.0, 2.0), (1.5, 3.0), (0.0, 2.0)]
    ring_b = rect_ring(2.0, 4.0, x0=1.0, y0=-1.0)
    got = boolean(PolygonSet.from_mm([ring_a]),
                  PolygonSet.from_mm([ring_b]), "intersection").area
    want = sg.Polygon(ring_a).intersection(sg.Polygon(ring_b)).area
    # intersection vertices snap to the 1 um grid; area may shift ~edge*1um
    assert abs(got - want) < 5e-4
