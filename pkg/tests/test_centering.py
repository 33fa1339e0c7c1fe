"""Central-region marking: slope threshold, policies, gap filtering."""

import math

from beadpath.centering import filter_marking, mark_central
from beadpath.geometry import PolygonSet
from beadpath.skeleton import build_st

from conftest import rect_ring, wedge_ring


def _marked_edges(st):
    return [e for e in st.edges if e.marked]


def test_shallow_wedge_axis_marked():
    # opening 20 deg: axis slope sin(10 deg) = 0.17 < cos(67.5 deg) = 0.38
    st = build_st(PolygonSet.from_mm([wedge_ring(20.0, length=6.0)]))
    mark_central(st)
    axis = [e for e in _marked_edges(st)
            if abs(e.n0.y) < 0.2 and abs(e.n1.y) < 0.2]
    assert axis, "wedge axis should be central"


def test_steep_wedge_axis_unmarked():
    # opening 60 deg: axis slope sin(30 deg) = 0.5 > threshold
    st = build_st(PolygonSet.from_mm([wedge_ring(60.0, length=4.0)]))
    mark_central(st)
    axis = [e for e in _marked_edges(st)
            if e.n0.r > 0.05 and e.n1.r > 0.05]
    assert not axis


def test_threshold_is_strict():
    # opening 45 deg: slope sin(22.5) equals cos(67.5) exactly -> unmarked
    h = 4.0 * math.tan(math.radians(22.5))
    st = build_st(PolygonSet.from_mm([[(0, 0), (4.0, -h), (4.0, h)]]))
    mark_central(st, 135.0)
    axis = [e for e in _marked_edges(st)
            if abs(e.n0.y) < 1e-6 and abs(e.n1.y) < 1e-6 and e.n0.r > 0.05]
    assert not axis


def test_rectangle_spine_marked_as_plateau():
    st = build_st(PolygonSet.from_mm([rect_ring(10.0, 2.0)]))
    mark_central(st)
    spine = [e for e in _marked_edges(st) if abs(e.n0.y - 1.0) < 1e-6
             and abs(e.n1.y - 1.0) < 1e-6]
    assert spine  # zero slope: always central


def test_disabled_policy_marks_only_maxima():
    st = build_st(PolygonSet.from_mm([wedge_ring(20.0, length=6.0)]))
    mark_central(st, policy="disabled")
    assert not _marked_edges(st)
    assert any(n.marked for n in st.nodes)
    top = max(st.nodes, key=lambda n: n.r)
    assert top.marked


def test_all_but_outline_policy():
    st = build_st(PolygonSet.from_mm([rect_ring(10.0, 2.0)]))
    mark_central(st, policy="all_but_outline")
    for e in st.edges:
        touches = e.n0.r < 1e-9 or e.n1.r < 1e-9
        assert e.marked == (not touches)


def test_filter_marking_bridges_short_gap():
    # dumbbell: two 2 mm-wide blobs joined by a thin 0.3 mm x 0.3 mm neck;
    # the neck walls are parallel (slope 0) so the neck itself is marked, but
    # the steep shoulder edges between blob and neck are not -- filtering
    # bridges them when the gap fits within d_max_unmarked
    ring = [(0.0, 0.0), (3.0, 0.0), (3.35, 0.85), (3.65, 0.85), (4.0, 0.0),
            (7.0, 0.0), (7.0, 2.0), (4.0, 2.0), (3.65, 1.15), (3.35, 1.15),
            (3.0, 2.0), (0.0, 2.0)]
    st = build_st(PolygonSet.from_mm([ring]))
    mark_central(st)
    before = sum(1 for e in st.edges if e.marked)
    # marked neck spine to marked blob maximum: 0.957 mm of unmarked shoulder
    filter_marking(st, d_max_unmarked=1.0)
    after = sum(1 for e in st.edges if e.marked)
    assert after > before
    # the whole shoulder path from neck to blob center is now marked
    shoulder = [n for n in st.nodes
                if abs(n.y - 1.0) < 1e-3 and 2.3 < n.x < 3.2]
    assert shoulder and all(n.marked for n in shoulder)


def test_filter_marking_keeps_long_gap_unmarked():
    ring = [(0.0, 0.0), (3.0, 0.0), (3.35, 0.85), (3.65, 0.85), (4.0, 0.0),
            (7.0, 0.0), (7.0, 2.0), (4.0, 2.0), (3.65, 1.15), (3.35, 1.15),
            (3.0, 2.0), (0.0, 2.0)]
    st = build_st(PolygonSet.from_mm([ring]))
    mark_central(st)
    before = [e.marked for e in st.edges]
    filter_marking(st, d_max_unmarked=0.4)  # shorter than the shoulders
    assert [e.marked for e in st.edges] == before
