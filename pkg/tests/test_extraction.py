"""Toolpath extraction: loops, center lines, retreat, dots."""

import math

import pytest
import shapely.geometry as sg

from beadpath.geometry import PolygonSet
from beadpath.pipeline import GenerateParams, generate_toolpaths

from conftest import rect_ring


def test_two_bead_rectangle_single_loop():
    ps = PolygonSet.from_mm([rect_ring(10.0, 0.8)])
    lines = generate_toolpaths(ps, "uniform")
    assert len(lines) == 1
    (loop,) = lines
    assert loop.closed
    assert loop.index == 0
    assert {round(s.w, 6) for s in loop.sites} == {0.4}
    # the loop follows the 0.2 mm inward offset of the outline
    oracle = sg.Polygon(rect_ring(10.0, 0.8)).buffer(-0.2, join_style=2)
    for s in loop.sites:
        assert oracle.exterior.distance(sg.Point(s.x, s.y)) < 1e-5


def test_nested_loops_indexed_outside_in():
    ps = PolygonSet.from_mm([rect_ring(10.0, 1.6)])
    lines = generate_toolpaths(ps, "uniform")
    loops = [l for l in lines if l.closed]
    assert sorted(l.index for l in loops) == [0, 1]
    outer = next(l for l in loops if l.index == 0)
    inner = next(l for l in loops if l.index == 1)
    assert min(s.y for s in outer.sites) < min(s.y for s in inner.sites)


def test_sites_inside_outline():
    ring = [(0.0, 0.0), (6.0, -1.5), (6.0, 1.8)]
    ps = PolygonSet.from_mm([ring])
    poly = sg.Polygon(ring).buffer(1e-6)
    for scheme in ("inward", "centered"):
        for line in generate_toolpaths(ps, scheme):
            for s in line.sites:
                assert poly.contains(sg.Point(s.x, s.y))


def test_odd_count_center_line_is_open():
    ps = PolygonSet.from_mm([rect_ring(10.0, 1.2)])
    lines = generate_toolpaths(ps, "evenly")
    center = [l for l in lines if not l.closed and not l.dot]
    assert len(center) == 1
    assert all(abs(s.y - 0.6) < 1e-6 for s in center[0].sites)
    assert all(abs(s.w - 0.4) < 1e-6 for s in center[0].sites)


def test_retreat_shortens_junction_branches():
    # plus shape, 1.2 mm arms: four center lines meet in the middle, and the
    # branches that dead-end there are pulled back by 0.75 * local width
    ring = [(-5, -0.6), (-0.6, -0.6), (-0.6, -5), (0.6, -5), (0.6, -0.6),
            (5, -0.6), (5, 0.6), (0.6, 0.6), (0.6, 5), (-0.6, 5),
            (-0.6, 0.6), (-5, 0.6)]
    ps = PolygonSet.from_mm([ring])

    def open_lines(retreat):
        lines = generate_toolpaths(ps, "evenly",
                                   GenerateParams(retreat=retreat))
        return [l for l in lines if not l.closed and not l.dot]

    def total(lines):
        return sum(math.hypot(b.x - a.x, b.y - a.y)
                   for l in lines for a, b in zip(l.sites, l.sites[1:]))

    full, cut = open_lines(0.0), open_lines(0.75)
    shortened = total(full) - total(cut)
    # four dead-ending branches, each by 0.75 * w with w in [0.4, 0.47]
    assert 1.0 < shortened < 1.5
    assert len(full) == len(cut)


def test_degenerate_center_becomes_dot():
    # 1.2 mm square, three beads: the center bead collapses to a point
    ps = PolygonSet.from_mm([rect_ring(1.2, 1.2)])
    lines = generate_toolpaths(ps, "evenly")
    dots = [l for l in lines if l.dot]
    assert len(dots) == 1
    (dot,) = dots
    (a, b) = dot.sites
    length = math.hypot(b.x - a.x, b.y - a.y)
    assert length == pytest.approx(0.01, abs=1e-9)
    # accounting width preserves the area of the 0.4 mm disc
    assert a.w == pytest.approx(math.pi * 0.4 ** 2 / (4 * 0.01), rel=1e-6)
    assert abs(a.x + length / 2.0 - 0.6) < 1e-6
    assert abs(a.y - 0.6) < 1e-6


def test_widths_positive_everywhere():
    ring = [(0.0, 0.0), (8.0, -1.2), (8.0, 1.4)]
    for scheme in ("evenly", "inward", "centered", "uniform"):
        for line in generate_toolpaths(PolygonSet.from_mm([ring]), scheme):
            assert all(s.w > 0 for s in line.sites)
